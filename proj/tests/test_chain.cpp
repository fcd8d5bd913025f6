#include <gtest/gtest.h>

#include <cmath>

#include "cryomux/chain.hpp"
#include "cryomux/error.hpp"

using namespace cryomux;
using namespace cryomux::chain;

namespace {

SampleStage s4_sample() {
  return SampleStage{resonator::CavityLerSystem::from_targets(4.779e9, 2.2e9, 10e6, 5e7, 8.14e6),
                     std::nullopt};
}

SampleStage s1_sample() {
  SampleStage s{resonator::CavityLerSystem::from_targets(6.4e9, 2.0e9, 20e6, 3e4, 1.2e4),
                loss::TlsModel{{loss::LossComponent{"tls", 1.0, 8.34e-5, 1.0, 0.5}}, 1e6}};
  return s;
}

ChainSpec bare(SampleStage sample, double attenuation_db = 0.0) {
  ChainSpec c;
  if (attenuation_db > 0.0) c.stages.push_back(AttenuatorStage{attenuation_db});
  c.stages.push_back(std::move(sample));
  c.rng_seed = 42;
  return c;
}

ChainSpec full_chain(std::uint64_t seed, double v_dd = 0.9) {
  ChainSpec c;
  c.rng_seed = seed;
  for (int i = 0; i < 3; ++i) c.stages.push_back(AttenuatorStage{20.0});
  MuxStage m;
  m.path_port = 3;
  m.selected_port = 3;
  m.v_dd = v_dd;
  c.stages.push_back(m);
  c.stages.push_back(s4_sample());
  c.stages.push_back(m);
  c.stages.push_back(BandpassStage{});
  c.stages.push_back(AmplifierStage{40.0, 4.0});
  c.stages.push_back(AmplifierStage{30.0, 300.0});
  return c;
}

SweepSpec sweep_at(double dbm, std::size_t averages = 100) {
  SweepSpec s;
  s.instrument_power_dbm = dbm;
  s.averages = averages;
  s.rbw_hz = 1.0;
  return s;
}

}  // namespace

TEST(ChainSpec, ExactlyOneSample) {
  ChainSpec none;
  none.stages.push_back(AttenuatorStage{10.0});
  EXPECT_THROW(none.validate(), Error);
  auto two = bare(s4_sample());
  two.stages.push_back(s4_sample());
  EXPECT_THROW(two.validate(), Error);
  EXPECT_NO_THROW(bare(s4_sample()).validate());
}

TEST(PowerAtSample, Attenuation) {
  EXPECT_NEAR(power_at_sample(bare(s4_sample(), 60.0), 0.0, 5e9), 1e-9, 1e-21);
  auto with_mux = bare(s4_sample(), 60.0);
  MuxStage m;
  m.selected_port = 0;
  with_mux.stages.insert(with_mux.stages.begin() + 1, m);
  const double extra_db = 10.0 * std::log10(1e-9 / power_at_sample(with_mux, 0.0, 6e9));
  EXPECT_NEAR(extra_db, 1.6, 0.5);
  // Stages after the sample do not matter.
  auto tail = bare(s4_sample(), 60.0);
  tail.stages.push_back(AttenuatorStage{30.0});
  EXPECT_EQ(power_at_sample(tail, 0.0, 5e9), power_at_sample(bare(s4_sample(), 60.0), 0.0, 5e9));
}

TEST(PowerAtSample, LinearInInstrumentPower) {
  const auto c = full_chain(1);
  const double a = power_at_sample(c, -100.0);
  EXPECT_NEAR(power_at_sample(c, -90.0) / a, 10.0, 1e-12);
}

TEST(NoiseTemperature, Friis) {
  const auto c = full_chain(1);
  const double expected = 4.0 + 300.0 / 1e4;
  EXPECT_NEAR(system_noise_temperature(c, 5e9), expected, 1e-12);
  EXPECT_EQ(system_noise_temperature(bare(s4_sample()), 5e9), 0.0);
}

TEST(Synthesis, NoiselessBareChainIsAttenuatedResonator) {
  const auto c = bare(s4_sample(), 20.0);
  const auto r = synthesize_sweep(c, sweep_at(-100.0));
  EXPECT_TRUE(r.trace.sigma.empty());
  const auto& sys = c.sample().system;
  for (std::size_t i = 0; i < r.trace.grid.size(); i += 50) {
    const complex expected =
        0.1 * resonator::to_network_convention(
                  resonator::s21_physics(sys, hz_to_rad(r.trace.grid[i])));
    EXPECT_LT(std::abs(r.trace.s21[i] - expected), 1e-12 * std::abs(expected) + 1e-18);
  }
}

TEST(Synthesis, SeedDeterminism) {
  const auto a = synthesize_sweep(full_chain(7), sweep_at(-101.41));
  const auto b = synthesize_sweep(full_chain(7), sweep_at(-101.41));
  const auto c = synthesize_sweep(full_chain(8), sweep_at(-101.41));
  EXPECT_EQ(a.trace.s21, b.trace.s21);
  EXPECT_NE(a.trace.s21, c.trace.s21);
  ASSERT_EQ(a.trace.sigma.size(), a.trace.s21.size());
}

TEST(Synthesis, OutOfBandWarning) {
  auto c = full_chain(1);
  for (auto& s : c.stages) {
    if (auto* b = std::get_if<BandpassStage>(&s)) b->f_lo = 5e9;
  }
  const auto r = synthesize_sweep(c, sweep_at(-101.41));
  bool found = false;
  for (const auto& w : r.warnings) found |= w.find("bandpass") != std::string::npos;
  EXPECT_TRUE(found);
  EXPECT_TRUE(synthesize_sweep(full_chain(1), sweep_at(-101.41)).warnings.empty());
}

TEST(Synthesis, NormalizedNoiseMatchesReferredSigma) {
  const auto c = full_chain(3);
  const auto r = synthesize_sweep(c, sweep_at(-101.41));
  const auto n = normalize_by_through(c, r.trace);
  // After normalisation the trace is the bare resonator plus noise whose
  // per-quadrature scatter is the reported sigma.
  const auto& sys = c.sample().system;
  double sum = 0.0;
  for (std::size_t i = 0; i < n.s21.size(); ++i) {
    const complex clean =
        resonator::to_network_convention(resonator::s21_physics(sys, hz_to_rad(n.grid[i])));
    sum += std::norm(n.s21[i] - clean) / (2.0 * n.sigma[i] * n.sigma[i]);
  }
  EXPECT_NEAR(sum / static_cast<double>(n.s21.size()), 1.0, 0.1);
}

TEST(SteadyState, SelfConsistent) {
  const auto s = s1_sample();
  for (double p : {1e-22, 1e-19, 1e-16, 1e-13}) {
    const auto ss = resonator_steady_state(s, p);
    ASSERT_TRUE(ss.converged) << p;
    const auto rates = resonator::purcell(s.system);
    const double omega = rates.omega_r_dressed;
    EXPECT_NEAR(ss.gamma_r / (omega * loss::qi_inverse(*s.tls, ss.n_photons)), 1.0, 1e-12);
    const double n = resonator::mean_photons_from_rates(rates, ss.gamma_r, p, omega);
    EXPECT_NEAR(n / ss.n_photons, 1.0, 1e-8);
  }
}

TEST(PowerSeries, FlatWithoutTls) {
  const auto c = bare(s4_sample(), 60.0);
  const auto r = run_power_series(c, sweep_at(0.0), {-120, -110, -100, -90, -80, -70, -60});
  ASSERT_EQ(r.entries.size(), 7u);
  for (const auto& e : r.entries) {
    ASSERT_TRUE(e.converged) << e.message;
    EXPECT_NEAR(e.fit->params.q_loaded / 7.0e6, 1.0, 0.01);
  }
  for (std::size_t k = 1; k < r.entries.size(); ++k) {
    EXPECT_NEAR(r.entries[k].n_photons / r.entries[k - 1].n_photons, 10.0, 1e-6);
  }
}

TEST(PowerSeries, ParallelEqualsSequential) {
  const auto c = full_chain(5);
  const std::vector<double> powers{-110, -100, -90};
  const auto a = run_power_series(c, sweep_at(0.0), powers, {false, true});
  const auto b = run_power_series(c, sweep_at(0.0), powers, {false, false});
  for (std::size_t k = 0; k < powers.size(); ++k) {
    EXPECT_EQ(a.entries[k].fit->result.params, b.entries[k].fit->result.params);
  }
}

TEST(PowerSeries, UnpoweredMuxKeepsLoadedQ) {
  const auto on = run_power_series(full_chain(9), sweep_at(0.0, 100000), {-80.0}, {false, false});
  const auto off =
      run_power_series(full_chain(9, 0.0), sweep_at(0.0, 100000), {-80.0}, {false, false});
  ASSERT_TRUE(on.entries[0].converged);
  ASSERT_TRUE(off.entries[0].converged);
  EXPECT_NEAR(off.entries[0].fit->params.q_loaded / on.entries[0].fit->params.q_loaded, 1.0, 0.02);
}

TEST(PowerSeries, RecoversTlsModel) {
  const auto c = bare(s1_sample());
  std::vector<double> powers;
  for (double p = -160.0; p <= -70.0; p += 5.0) powers.push_back(p);
  const auto r = run_power_series(c, sweep_at(0.0), powers);
  ASSERT_TRUE(r.tls_fit.has_value());
  const auto& t = *r.tls_fit;
  EXPECT_TRUE(t.converged());
  EXPECT_NEAR(t.p_tan_delta / 8.34e-5, 1.0, 0.02);
  EXPECT_NEAR(t.n_c, 1.0, 0.05);
  EXPECT_NEAR(t.beta, 0.5, 0.02);
  EXPECT_NEAR(t.q0 / 1e6, 1.0, 0.05);
}
