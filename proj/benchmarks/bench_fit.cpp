#include <benchmark/benchmark.h>

#include <complex>
#include <random>

#include "cryomux/fit/lm.hpp"
#include "cryomux/fit/spectrum_fit.hpp"
#include "cryomux/resonator.hpp"

using namespace cryomux;

static void BM_LmRosenbrock(benchmark::State& state) {
  const fit::ResidualFn fn = [](const fit::Vector& x) {
    fit::Vector r(2);
    r << 10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0];
    return r;
  };
  fit::Vector x0(2);
  x0 << -1.2, 1.0;
  const auto bounds = fit::Bounds::unbounded(2);
  for (auto _ : state) benchmark::DoNotOptimize(fit::lm_minimize(fn, x0, bounds));
}
BENCHMARK(BM_LmRosenbrock);

static void BM_FitSpectrum(benchmark::State& state) {
  resonator::LorentzianParams p;
  p.f_r = 4.8e9;
  p.q_loaded = 2e5;
  p.q_c_mag = 5e5;
  p.phi = 0.1;
  const auto n = static_cast<std::size_t>(state.range(0));
  const double lw = p.f_r / p.q_loaded;
  const auto grid = rfnet::FrequencyGrid::linspace(p.f_r - 5 * lw, p.f_r + 5 * lw, n);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<complex> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = resonator::s21_lorentzian(p, grid[i]) + complex(noise(rng), noise(rng));
  }
  const fit::ComplexTrace trace{grid, y, {}};
  for (auto _ : state) benchmark::DoNotOptimize(fit::fit_spectrum(trace));
}
BENCHMARK(BM_FitSpectrum)->Arg(201)->Arg(801);
