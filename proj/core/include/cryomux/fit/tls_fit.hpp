#pragma once

#include <optional>
#include <vector>

#include "cryomux/fit/lm.hpp"
#include "cryomux/lossbudget.hpp"

namespace cryomux::fit {

struct PowerSweepPoint {
  double n_photons = 0.0;
  double q_loaded = 0.0;
  double q_uncertainty = 0.0;

  void validate() const;
};

struct PowerSweepBounds {
  double beta_min = 0.1, beta_max = 1.0;
  double n_c_min = 1e-3, n_c_max = 1e9;
  double q_min = 10.0, q_max = 1e12;
};

struct TlsFit {
  // params: p_tan_delta, log10_n_c, beta, log10_q0
  FitResult result;
  loss::TlsModel model;  // single effective component
  double p_tan_delta = 0.0;
  double n_c = 0.0;
  double beta = 0.0;
  double q0 = 0.0;

  bool converged() const { return result.converged; }
  /// Internal Q predicted by the fitted model at n photons.
  double q_at(double n_photons) const;
};

/// Fits a single effective TLS component plus Q_0 to 1/Q_i(n). Residuals are
/// taken in log(1/Q) and weighted by the relative Q uncertainty. With
/// q_c_mag, loaded Qs are first converted to internal Qs.
TlsFit fit_power_sweep(const std::vector<PowerSweepPoint>& points,
                       std::optional<double> q_c_mag = std::nullopt,
                       const PowerSweepBounds& bounds = {}, const Tolerances& tol = {});

}  // namespace cryomux::fit
