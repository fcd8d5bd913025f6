#include "cryomux/fit/stark.hpp"

#include <cmath>

#include "cryomux/error.hpp"
#include "cryomux/units.hpp"

namespace cryomux::fit {

void StarkContext::validate() const {
  if (chi == 0.0 || !std::isfinite(chi)) throw Error(ErrorKind::invalid_input, "chi must be non-zero");
  if (!(nu_r > 0.0)) throw Error(ErrorKind::invalid_input, "resonator frequency must be positive");
  if (nu_q && !(*nu_q > 0.0)) throw Error(ErrorKind::invalid_input, "qubit frequency must be positive");
}

namespace {

// h nu / k_B T
double reduced_energy(double nu_hz, double temperature_k) {
  return constants::planck * nu_hz / (constants::boltzmann * temperature_k);
}

constexpr std::size_t max_terms = 10'000'000;

}  // namespace

double stark_forward(const StarkContext& ctx, double temperature_k,
                     std::optional<std::size_t> truncation) {
  ctx.validate();
  if (!(temperature_k >= 0.0)) throw Error(ErrorKind::invalid_input, "temperature must be >= 0");
  if (temperature_k == 0.0) return 0.0;
  const double a = reduced_energy(ctx.nu_r, temperature_k);

  // Kahan-compensated sums of i x^i and x^i.
  double num = 0.0, num_c = 0.0, den = 0.0, den_c = 0.0;
  auto add = [](double& sum, double& comp, double v) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  const std::size_t limit = truncation ? *truncation : max_terms;
  double ratio = 0.0;
  for (std::size_t i = 0; i < limit; ++i) {
    const double weight = std::exp(-a * static_cast<double>(i));
    add(num, num_c, static_cast<double>(i) * weight);
    add(den, den_c, weight);
    const double next = num / den;
    if (!truncation && i > 0 && std::abs(next - ratio) <= 1e-15 * std::abs(next) &&
        static_cast<double>(i) * weight <= 1e-15 * num) {
      ratio = next;
      break;
    }
    ratio = next;
  }
  return 2.0 * ctx.chi * ratio;
}

double stark_forward_closed_form(const StarkContext& ctx, double temperature_k) {
  ctx.validate();
  if (!(temperature_k >= 0.0)) throw Error(ErrorKind::invalid_input, "temperature must be >= 0");
  if (temperature_k == 0.0) return 0.0;
  const double a = reduced_energy(ctx.nu_r, temperature_k);
  // x / (1 - x) = 1 / (e^a - 1)
  return 2.0 * ctx.chi / std::expm1(a);
}

double temperature_from_population(double n_mean, double nu_hz) {
  if (!(n_mean >= 0.0)) throw Error(ErrorKind::nonphysical_population, "negative population");
  if (n_mean == 0.0) return 0.0;
  // x = n / (1 + n), T = h nu / (k_B ln(1/x)) and ln(1/x) = log1p(1/n)
  return constants::planck * nu_hz / (constants::boltzmann * std::log1p(1.0 / n_mean));
}

StarkInversion stark_invert(const StarkContext& ctx, double delta_ac_hz,
                            TemperatureConvention convention) {
  ctx.validate();
  const double n_mean = delta_ac_hz / (2.0 * ctx.chi);
  if (n_mean < 0.0 || !std::isfinite(n_mean)) {
    throw Error(ErrorKind::nonphysical_population,
                "ac Stark shift and chi have opposite signs");
  }
  double nu = ctx.nu_r;
  if (convention == TemperatureConvention::qubit) {
    if (!ctx.nu_q) throw Error(ErrorKind::invalid_input, "qubit convention needs nu_q");
    nu = *ctx.nu_q;
  }
  return {n_mean, temperature_from_population(n_mean, nu)};
}

}  // namespace cryomux::fit
