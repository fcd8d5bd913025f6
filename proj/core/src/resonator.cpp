#include "cryomux/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cryomux/error.hpp"

namespace cryomux::resonator {

std::vector<std::string> CavityLerSystem::validate() const {
  if (!(omega_c > 0.0) || !(omega_r > 0.0) || !(kappa_i > 0.0) || !(kappa_o > 0.0) ||
      !(gamma_r > 0.0) || !(g >= 0.0) || !(gamma_c >= 0.0)) {
    throw Error(ErrorKind::invalid_input,
                "cavity-LER rates must be positive (gamma_c, g may be zero)");
  }
  std::vector<std::string> warnings;
  const double widest = std::max({kappa_i, kappa_o, gamma_r});
  if (!(std::abs(detuning()) > 10.0 * widest)) {
    std::ostringstream os;
    os << "dispersive approximation doubtful: |omega_c - omega_r| = " << std::abs(detuning())
       << " rad/s is not > 10 x " << widest << " rad/s";
    warnings.push_back(os.str());
  }
  return warnings;
}

CavityLerSystem CavityLerSystem::from_targets(double f_dressed_hz, double detuning_hz,
                                              double kappa_hz, double q_coupling,
                                              double q_internal) {
  if (!(f_dressed_hz > 0.0) || !(detuning_hz > 0.0) || !(kappa_hz > 0.0) ||
      !(q_coupling > 0.0) || !(q_internal > 0.0)) {
    throw Error(ErrorKind::invalid_input, "resonator targets must be positive");
  }
  const double omega_dressed = hz_to_rad(f_dressed_hz);
  const double kappa = hz_to_rad(kappa_hz);
  // kappa_pur = 2 kappa (g/Delta)^2 = omega_dressed / Q_c
  const double ratio_sq = omega_dressed / (q_coupling * 2.0 * kappa);
  const double delta = hz_to_rad(detuning_hz);
  const double g = delta * std::sqrt(ratio_sq);
  CavityLerSystem sys;
  sys.omega_r = omega_dressed + g * g / delta;
  sys.omega_c = sys.omega_r + delta;
  sys.g = g;
  sys.kappa_i = kappa;
  sys.kappa_o = kappa;
  sys.gamma_c = 0.0;
  sys.gamma_r = omega_dressed / q_internal;
  return sys;
}

PurcellRates purcell(const CavityLerSystem& sys) {
  const double delta = sys.detuning();
  if (delta == 0.0) {
    throw Error(ErrorKind::dispersive_breakdown, "cavity and LER are degenerate");
  }
  const double ratio_sq = (sys.g / delta) * (sys.g / delta);
  PurcellRates r;
  r.kappa_pur_i = sys.kappa_i * ratio_sq;
  r.kappa_pur_o = sys.kappa_o * ratio_sq;
  r.kappa_pur = r.kappa_pur_i + r.kappa_pur_o;
  r.omega_r_dressed = sys.omega_r - sys.g * sys.g / delta;
  return r;
}

complex s21_physics(const CavityLerSystem& sys, double omega) {
  const auto r = purcell(sys);
  const complex i(0.0, 1.0);
  return i * std::sqrt(r.kappa_pur_i * r.kappa_pur_o) /
         (omega - r.omega_r_dressed + i * (r.kappa_pur + sys.gamma_r) / 2.0);
}

complex s21_coupled_modes(const CavityLerSystem& sys, double omega, bool keep_gamma_c) {
  // Steady state of the two coupled Langevin equations with a single drive
  // port; the output field is sqrt(kappa_o) times the cavity field.
  const complex i(0.0, 1.0);
  const double cavity_width =
      (sys.kappa_i + sys.kappa_o + (keep_gamma_c ? sys.gamma_c : 0.0)) / 2.0;
  const complex ler = i * (sys.omega_r - omega) + sys.gamma_r / 2.0;
  const complex cavity = i * (sys.omega_c - omega) + cavity_width;
  return std::sqrt(sys.kappa_i * sys.kappa_o) * ler / (cavity * ler + sys.g * sys.g);
}

double loaded_q(const CavityLerSystem& sys) {
  const auto r = purcell(sys);
  return r.omega_r_dressed / (r.kappa_pur + sys.gamma_r);
}

double coupling_q(const CavityLerSystem& sys) {
  const auto r = purcell(sys);
  return r.omega_r_dressed / (2.0 * std::sqrt(r.kappa_pur_i * r.kappa_pur_o));
}

complex LorentzianParams::resonant_amplitude() const {
  return a_scale * (q_loaded / q_c_mag) * std::polar(1.0, phi);
}

void LorentzianParams::validate() const {
  if (!(q_loaded > 0.0) || !(q_c_mag > 0.0) || !(f_r > 0.0)) {
    throw Error(ErrorKind::invalid_input, "Lorentzian requires positive f_r, Q_L and |Q_c|");
  }
}

complex s21_lorentzian(const LorentzianParams& p, double f) {
  const complex i(0.0, 1.0);
  const double x = (f - p.f_r) / p.f_r;
  return p.resonant_amplitude() / (1.0 + 2.0 * i * p.q_loaded * x) + p.b_offset;
}

double q_internal(double q_loaded, double q_c_mag) {
  if (!(q_loaded > 0.0)) throw Error(ErrorKind::invalid_input, "Q_L must be positive");
  if (std::isinf(q_c_mag)) return q_loaded;
  if (!(q_loaded < q_c_mag)) {
    throw Error(ErrorKind::nonphysical_internal_loss, "Q_L must be below |Q_c|");
  }
  return 1.0 / (1.0 / q_loaded - 1.0 / q_c_mag);
}

double mean_photons_from_rates(const PurcellRates& rates, double gamma_r, double p_in,
                               double omega_drive) {
  if (!(p_in >= 0.0)) throw Error(ErrorKind::invalid_input, "input power must be >= 0");
  const double half_width = (rates.kappa_pur + gamma_r) / 2.0;
  const double detuning = omega_drive - rates.omega_r_dressed;
  const double flux = p_in / (constants::hbar * rates.omega_r_dressed);
  return rates.kappa_pur_i / (detuning * detuning + half_width * half_width) * flux;
}

double mean_photons_measurable(double s21_peak, double q_loaded, double p_in,
                               double omega_dressed) {
  if (!(s21_peak >= 0.0 && s21_peak <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "peak transmission must lie in [0, 1]");
  }
  if (!(p_in >= 0.0)) throw Error(ErrorKind::invalid_input, "input power must be >= 0");
  if (!(q_loaded > 0.0) || !(omega_dressed > 0.0)) {
    throw Error(ErrorKind::invalid_input, "Q_L and frequency must be positive");
  }
  return 2.0 * s21_peak * q_loaded * p_in / (constants::hbar * omega_dressed * omega_dressed);
}

}  // namespace cryomux::resonator
