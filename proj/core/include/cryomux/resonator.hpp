#pragma once

// Lumped-element resonator (LER) coupled to a detuned 3D cavity mode.
//
// Rates are angular (rad/s) throughout this header. Transmission functions
// come in two sign conventions: s21_physics follows the e^{-i omega t}
// convention of the Langevin equations, while s21_lorentzian and measured
// traces use the e^{+j omega t} network-analyser convention. The two are
// related by complex conjugation (see to_network_convention).

#include <string>
#include <vector>

#include "cryomux/units.hpp"

namespace cryomux::resonator {

struct CavityLerSystem {
  double omega_c = 0.0;   // cavity mode
  double omega_r = 0.0;   // bare LER
  double g = 0.0;         // LER-cavity coupling
  double kappa_i = 0.0;   // input port coupling
  double kappa_o = 0.0;   // output port coupling
  double gamma_c = 0.0;   // cavity internal loss
  double gamma_r = 0.0;   // LER internal loss

  double detuning() const { return omega_c - omega_r; }

  /// Throws invalid-input on non-positive rates. Returns human-readable
  /// warnings, e.g. when the dispersive approximation is doubtful.
  std::vector<std::string> validate() const;

  /// Builds a symmetric system (kappa_i = kappa_o) that hits a dressed LER
  /// frequency, coupling Q and internal Q, with the cavity detuned upwards by
  /// `detuning_hz`. All arguments in Hz or dimensionless.
  static CavityLerSystem from_targets(double f_dressed_hz, double detuning_hz,
                                      double kappa_hz, double q_coupling, double q_internal);
};

struct PurcellRates {
  double kappa_pur_i = 0.0;
  double kappa_pur_o = 0.0;
  double kappa_pur = 0.0;
  double omega_r_dressed = 0.0;
};

PurcellRates purcell(const CavityLerSystem& sys);

/// Dispersive-limit transmission through cavity and LER near omega_r_dressed.
complex s21_physics(const CavityLerSystem& sys, double omega);

/// Transmission from the full coupled-mode solution, without the dispersive
/// expansion. With keep_gamma_c = false the cavity loss is dropped, as in the
/// dispersive expressions.
complex s21_coupled_modes(const CavityLerSystem& sys, double omega, bool keep_gamma_c = true);

inline complex to_network_convention(complex s21_physics_convention) {
  return std::conj(s21_physics_convention);
}

/// Loaded Q of the dressed LER: omega_r_dressed / (kappa_pur + gamma_r).
double loaded_q(const CavityLerSystem& sys);
/// Coupling Q magnitude seen by a complex-Lorentzian fit.
double coupling_q(const CavityLerSystem& sys);

struct LorentzianParams {
  complex a_scale{1.0};
  complex b_offset{0.0};
  double f_r = 0.0;        // Hz
  double q_loaded = 0.0;
  double q_c_mag = 0.0;
  double phi = 0.0;        // rad

  /// Value at resonance minus background: A (Q_L/|Q_c|) e^{i phi}.
  complex resonant_amplitude() const;
  void validate() const;
};

/// Generalised Lorentzian with complex coupling Q, f in Hz.
complex s21_lorentzian(const LorentzianParams& p, double f);

/// 1/Q_i = 1/Q_L - 1/|Q_c|.
double q_internal(double q_loaded, double q_c_mag);

/// Mean intracavity photon number from the Purcell rates, for a drive at
/// omega_drive with incident power p_in (W) referenced to the dressed mode.
double mean_photons_from_rates(const PurcellRates& rates, double gamma_r, double p_in,
                               double omega_drive);

/// Mean photon number from measurable quantities, assuming symmetric coupling:
/// 2 S21(peak) Q_L P_in / (hbar omega^2).
double mean_photons_measurable(double s21_peak, double q_loaded, double p_in,
                               double omega_dressed);

}  // namespace cryomux::resonator
