#include <benchmark/benchmark.h>

#include "cryomux/muxsim.hpp"

using namespace cryomux;

static void BM_PortSParams(benchmark::State& state) {
  const mux::MuxConfig cfg;
  const auto on = mux::program_parallel(mux::ControlState::initial(4), 1);
  const auto grid =
      rfnet::FrequencyGrid::linspace(4e9, 8e9, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mux::port_s_params(cfg, on, cfg.v_dd_nominal, grid, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PortSParams)->Arg(101)->Arg(1001)->Arg(10001);
