#include <benchmark/benchmark.h>

#include "cryomux/chain.hpp"

using namespace cryomux;

static void BM_SynthesizeSweep(benchmark::State& state) {
  chain::ChainSpec c;
  c.rng_seed = 3;
  for (int i = 0; i < 3; ++i) c.stages.push_back(chain::AttenuatorStage{20.0});
  chain::MuxStage m;
  c.stages.push_back(m);
  c.stages.push_back(chain::SampleStage{
      resonator::CavityLerSystem::from_targets(4.779e9, 2.2e9, 10e6, 5e7, 8.14e6), std::nullopt});
  c.stages.push_back(m);
  c.stages.push_back(chain::BandpassStage{});
  c.stages.push_back(chain::AmplifierStage{40.0, 4.0});
  chain::SweepSpec s;
  s.instrument_power_dbm = -101.41;
  s.points_per_trace = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chain::synthesize_sweep(c, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthesizeSweep)->Arg(401)->Arg(4001);
