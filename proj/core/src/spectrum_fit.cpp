#include "cryomux/fit/spectrum_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cryomux/error.hpp"

namespace cryomux::fit {

using resonator::LorentzianParams;

void ComplexTrace::validate() const {
  if (s21.size() != grid.size()) {
    throw Error(ErrorKind::invalid_input, "trace length does not match its frequency grid");
  }
  if (!sigma.empty()) {
    if (sigma.size() != s21.size()) {
      throw Error(ErrorKind::invalid_input, "sigma length does not match trace length");
    }
    for (double s : sigma) {
      if (!(s > 0.0)) throw Error(ErrorKind::invalid_input, "trace sigmas must be positive");
    }
  }
  for (const auto& v : s21) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::invalid_input, "trace contains non-finite values");
    }
  }
}

LorentzianParams estimate_initial(const ComplexTrace& trace) {
  trace.validate();
  const std::size_t n = trace.s21.size();
  if (n < 7) throw Error(ErrorKind::poor_window, "trace too short to locate a resonance");

  const std::size_t edge = std::max<std::size_t>(1, (n + 39) / 40);
  complex background = 0.0;
  for (std::size_t i = 0; i < edge; ++i) background += trace.s21[i] + trace.s21[n - 1 - i];
  background /= static_cast<double>(2 * edge);

  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = std::abs(trace.s21[i] - background);
  const auto peak_it = std::max_element(dist.begin(), dist.end());
  const std::size_t peak = static_cast<std::size_t>(peak_it - dist.begin());
  const double height = *peak_it;
  if (peak == 0 || peak == n - 1) {
    throw Error(ErrorKind::poor_window, "resonance at the edge of the frequency window");
  }

  double edge_spread = 0.0;
  for (std::size_t i = 0; i < edge; ++i) edge_spread = std::max({edge_spread, dist[i], dist[n - 1 - i]});
  if (!(height > 3.0 * edge_spread) || height == 0.0) {
    throw Error(ErrorKind::poor_window, "no resonance stands out from the background");
  }

  const double half = height / 2.0;
  const auto& f = trace.grid;
  auto crossing = [&](std::size_t inner, std::size_t outer) {
    const double t = (dist[inner] - half) / (dist[inner] - dist[outer]);
    return f[inner] + t * (f[outer] - f[inner]);
  };
  std::optional<double> left, right;
  for (std::size_t i = peak; i > 0; --i) {
    if (dist[i - 1] < half) {
      left = crossing(i, i - 1);
      break;
    }
  }
  for (std::size_t i = peak; i + 1 < n; ++i) {
    if (dist[i + 1] < half) {
      right = crossing(i, i + 1);
      break;
    }
  }
  double full_width = 0.0;
  if (left && right) {
    full_width = *right - *left;
  } else if (left) {
    full_width = 2.0 * (f[peak] - *left);
  } else if (right) {
    full_width = 2.0 * (*right - f[peak]);
  } else {
    throw Error(ErrorKind::poor_window, "resonance wider than the frequency window");
  }
  if (!(full_width > 0.0)) full_width = f[peak + 1] - f[peak - 1];

  LorentzianParams p;
  p.f_r = f[peak];
  // |Lorentzian| drops to half its peak at 2 Q_L (f/f_r - 1) = +-sqrt(3).
  p.q_loaded = std::sqrt(3.0) * p.f_r / full_width;
  const complex amplitude = trace.s21[peak] - background;
  p.q_c_mag = 10.0 * p.q_loaded;
  p.phi = std::arg(amplitude);
  p.a_scale = std::abs(amplitude) * p.q_c_mag / p.q_loaded;
  p.b_offset = background;
  return p;
}

SpectrumFit fit_spectrum(const ComplexTrace& trace, const SpectrumFitOptions& options) {
  if (options.a_scale == complex(0.0)) {
    throw Error(ErrorKind::invalid_input, "scale factor A must be non-zero");
  }
  const LorentzianParams init = estimate_initial(trace);
  const complex c0 = init.resonant_amplitude();
  const double scale = std::abs(c0);
  const double f0 = init.f_r;
  const double q0 = init.q_loaded;
  const double width0 = f0 / q0;
  const std::size_t n = trace.s21.size();

  std::vector<double> offsets(n);
  std::vector<complex> y(n);
  std::vector<double> inv_sigma(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = trace.grid[i] - f0;
    y[i] = trace.s21[i] / scale;
    if (!trace.sigma.empty()) inv_sigma[i] = scale / trace.sigma[i];
  }

  // x = [(f_r - f0) / width0, Q_L / Q_L0, Re c, Im c, Re B, Im B], c and B in units
  // of the initial resonance amplitude.
  const ResidualFn residuals = [&](const Vector& x) {
    Vector r(2 * static_cast<Eigen::Index>(n));
    const double shift = x[0] * width0;
    const double f_r = f0 + shift;
    const complex c(x[2], x[3]);
    const complex b(x[4], x[5]);
    for (std::size_t i = 0; i < n; ++i) {
      const double detuning = (offsets[i] - shift) / f_r;
      const complex model = c / complex(1.0, 2.0 * x[1] * q0 * detuning) + b;
      const complex d = (y[i] - model) * inv_sigma[i];
      r[2 * static_cast<Eigen::Index>(i)] = d.real();
      r[2 * static_cast<Eigen::Index>(i) + 1] = d.imag();
    }
    return r;
  };

  Vector x0(6);
  x0 << 0.0, 1.0, c0.real() / scale, c0.imag() / scale, init.b_offset.real() / scale,
      init.b_offset.imag() / scale;
  Bounds bounds = Bounds::unbounded(6);
  bounds.lower[0] = (trace.grid.front() - f0) / width0;
  bounds.upper[0] = (trace.grid.back() - f0) / width0;
  bounds.lower[1] = 10.0 / q0;

  FitResult raw = lm_minimize(residuals, x0, bounds, options.tolerances);

  SpectrumFit out;
  FitResult& res = out.result;
  res = raw;
  res.names = {"f_r", "q_loaded", "c_re", "c_im", "b_re", "b_im"};
  const Vector units = (Vector(6) << width0, q0, scale, scale, scale, scale).finished();
  res.params = raw.params.cwiseProduct(units);
  res.params[0] += f0;
  res.covariance = units.asDiagonal() * raw.covariance * units.asDiagonal();

  const complex c(res.params[2], res.params[3]);
  auto& p = out.params;
  p.f_r = res.params[0];
  p.q_loaded = res.params[1];
  p.a_scale = options.a_scale;
  p.b_offset = complex(res.params[4], res.params[5]);
  const double c_abs = std::abs(c);
  p.q_c_mag = p.q_loaded * std::abs(options.a_scale) / c_abs;
  p.phi = std::arg(c / options.a_scale);

  // Linear error propagation for the derived |Q_c| and phi.
  Eigen::RowVectorXd d_qc = Eigen::RowVectorXd::Zero(6);
  d_qc[1] = std::abs(options.a_scale) / c_abs;
  d_qc[2] = -p.q_c_mag * c.real() / (c_abs * c_abs);
  d_qc[3] = -p.q_c_mag * c.imag() / (c_abs * c_abs);
  Eigen::RowVectorXd d_phi = Eigen::RowVectorXd::Zero(6);
  d_phi[2] = -c.imag() / (c_abs * c_abs);
  d_phi[3] = c.real() / (c_abs * c_abs);
  out.q_c_mag_stderr = std::sqrt(std::max(0.0, (d_qc * res.covariance * d_qc.transpose())(0, 0)));
  out.phi_stderr = std::sqrt(std::max(0.0, (d_phi * res.covariance * d_phi.transpose())(0, 0)));
  return out;
}

double photon_axis(double p_in_at_sample, const SpectrumFit& fit, double drive_freq_hz) {
  if (!fit.converged()) {
    throw Error(ErrorKind::invalid_input, "photon number needs a converged spectrum fit");
  }
  if (!(drive_freq_hz > 0.0)) throw Error(ErrorKind::invalid_input, "drive frequency must be > 0");
  return resonator::mean_photons_measurable(fit.peak_s21(), fit.params.q_loaded, p_in_at_sample,
                                            hz_to_rad(drive_freq_hz));
}

}  // namespace cryomux::fit
