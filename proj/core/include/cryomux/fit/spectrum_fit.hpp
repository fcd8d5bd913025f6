#pragma once

#include <optional>
#include <vector>

#include "cryomux/fit/lm.hpp"
#include "cryomux/resonator.hpp"
#include "cryomux/rfnet.hpp"

namespace cryomux::fit {

/// Complex transmission versus frequency, optionally with a per-point noise
/// sigma (per quadrature).
struct ComplexTrace {
  rfnet::FrequencyGrid grid;
  std::vector<complex> s21;
  std::vector<double> sigma;  // empty or one per point

  void validate() const;
};

/// Heuristic starting point for fit_spectrum. |Q_c| is seeded at 10 Q_L and
/// A absorbs the remaining amplitude and phase of the resonance.
resonator::LorentzianParams estimate_initial(const ComplexTrace& trace);

struct SpectrumFitOptions {
  // Calibrated scale factor A of the generalised Lorentzian. Only the product
  // A |Q_c|^-1 e^{i phi} is observable, so A has to be known up front; 1
  // means the trace is already normalised by the through response.
  complex a_scale{1.0};
  Tolerances tolerances{};
};

struct SpectrumFit {
  FitResult result;  // params: f_r, q_loaded, c_re, c_im, b_re, b_im
  resonator::LorentzianParams params;
  double q_c_mag_stderr = 0.0;
  double phi_stderr = 0.0;

  bool converged() const { return result.converged; }
  /// Peak transmission of the resonator itself, Q_L / |Q_c|.
  double peak_s21() const { return params.q_loaded / params.q_c_mag; }
};

/// Least-squares fit of the generalised Lorentzian on stacked real and
/// imaginary residuals.
SpectrumFit fit_spectrum(const ComplexTrace& trace, const SpectrumFitOptions& options = {});

/// Mean photon number at the drive frequency for p_in_at_sample watts.
double photon_axis(double p_in_at_sample, const SpectrumFit& fit, double drive_freq_hz);

}  // namespace cryomux::fit
