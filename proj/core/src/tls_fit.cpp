#include "cryomux/fit/tls_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cryomux/error.hpp"
#include "cryomux/resonator.hpp"

namespace cryomux::fit {

void PowerSweepPoint::validate() const {
  if (!(n_photons >= 0.0) || !(q_loaded > 0.0) || !(q_uncertainty > 0.0)) {
    throw Error(ErrorKind::invalid_input,
                "power sweep points need n >= 0, Q > 0 and uncertainty > 0");
  }
}

double TlsFit::q_at(double n_photons) const { return 1.0 / loss::qi_inverse(model, n_photons); }

namespace {

constexpr std::size_t n_params = 4;

struct Prepared {
  std::vector<double> n;
  std::vector<double> log_inv_q;
  std::vector<double> weight;  // 1 / relative uncertainty
  double q_ref = 1.0;
};

Prepared prepare(const std::vector<PowerSweepPoint>& points, std::optional<double> q_c_mag) {
  Prepared p;
  std::vector<double> qs;
  for (const auto& pt : points) {
    pt.validate();
    double q = pt.q_loaded;
    double sigma = pt.q_uncertainty;
    if (q_c_mag) {
      q = resonator::q_internal(pt.q_loaded, *q_c_mag);
      const double ratio = q / pt.q_loaded;
      sigma = pt.q_uncertainty * ratio * ratio;
    }
    p.n.push_back(pt.n_photons);
    p.log_inv_q.push_back(-std::log(q));
    p.weight.push_back(q / sigma);
    qs.push_back(q);
  }
  std::nth_element(qs.begin(), qs.begin() + static_cast<long>(qs.size() / 2), qs.end());
  p.q_ref = qs[qs.size() / 2];
  return p;
}

// x = [p tan(d) * q_ref, log10 n_c, beta, log10 Q_0]
double model_inv_q(const Vector& x, double q_ref, double n) {
  const double ptd = x[0] / q_ref;
  const double n_c = std::pow(10.0, x[1]);
  return ptd / std::pow(1.0 + n / n_c, x[2]) + std::pow(10.0, -x[3]);
}

}  // namespace

TlsFit fit_power_sweep(const std::vector<PowerSweepPoint>& points, std::optional<double> q_c_mag,
                       const PowerSweepBounds& bounds, const Tolerances& tol) {
  if (points.size() < n_params) {
    throw Error(ErrorKind::underdetermined, "power sweep needs at least " +
                                                std::to_string(n_params) + " points");
  }
  const Prepared data = prepare(points, q_c_mag);
  const std::size_t m = data.n.size();

  const ResidualFn residuals = [&](const Vector& x) {
    Vector r(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const double inv_q = model_inv_q(x, data.q_ref, data.n[i]);
      r[static_cast<Eigen::Index>(i)] = (std::log(inv_q) - data.log_inv_q[i]) * data.weight[i];
    }
    return r;
  };

  Bounds b;
  b.lower = Vector(4);
  b.upper = Vector(4);
  b.lower << 0.0, std::log10(bounds.n_c_min), bounds.beta_min, std::log10(bounds.q_min);
  b.upper << data.q_ref, std::log10(bounds.n_c_max), bounds.beta_max, std::log10(bounds.q_max);

  // Seed from the low- and high-power ends, then pick the best saturation
  // scale on a coarse grid.
  const auto lo = std::min_element(data.n.begin(), data.n.end()) - data.n.begin();
  const auto hi = std::max_element(data.n.begin(), data.n.end()) - data.n.begin();
  const double inv_q_lo = std::exp(data.log_inv_q[static_cast<std::size_t>(lo)]);
  const double inv_q_hi = std::exp(data.log_inv_q[static_cast<std::size_t>(hi)]);
  const double ptd0 = std::max(inv_q_lo - inv_q_hi, 0.01 * inv_q_lo) * data.q_ref;
  const double log_q0 = std::clamp(-std::log10(inv_q_hi), b.lower[3], b.upper[3]);

  Vector best(4);
  double best_cost = std::numeric_limits<double>::infinity();
  const double n_lo = std::max(data.n[static_cast<std::size_t>(lo)], bounds.n_c_min);
  const double n_hi = std::max(data.n[static_cast<std::size_t>(hi)], n_lo * 10.0);
  for (double log_nc = std::log10(n_lo); log_nc <= std::log10(n_hi) + 1e-9; log_nc += 0.5) {
    for (double beta : {0.3, 0.5, 0.8}) {
      Vector x(4);
      x << std::min(ptd0, b.upper[0]), std::clamp(log_nc, b.lower[1], b.upper[1]), beta, log_q0;
      const Vector r = residuals(x);
      if (!r.allFinite()) continue;
      const double cost = r.squaredNorm();
      if (cost < best_cost) {
        best_cost = cost;
        best = x;
      }
    }
  }
  if (!std::isfinite(best_cost)) {
    throw Error(ErrorKind::invalid_input, "could not seed the power sweep fit");
  }

  FitResult raw = lm_minimize(residuals, best, b, tol);

  TlsFit out;
  out.result = raw;
  out.result.names = {"p_tan_delta", "log10_n_c", "beta", "log10_q0"};
  out.result.params[0] = raw.params[0] / data.q_ref;
  out.result.covariance.row(0) /= data.q_ref;
  out.result.covariance.col(0) /= data.q_ref;
  out.p_tan_delta = out.result.params[0];
  out.n_c = std::pow(10.0, raw.params[1]);
  out.beta = raw.params[2];
  out.q0 = std::pow(10.0, raw.params[3]);
  out.model.q0 = out.q0;
  out.model.components.push_back(
      loss::LossComponent{"effective TLS", 1.0, out.p_tan_delta, out.n_c, out.beta});
  return out;
}

}  // namespace cryomux::fit
