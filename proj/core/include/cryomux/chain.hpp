#pragma once

// Measurement chain: instrument -> input attenuation -> demux -> sample ->
// mux -> filter -> amplifiers. Forward simulation of network-analyser sweeps
// and the power-series analysis built on top of them.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cryomux/fit/spectrum_fit.hpp"
#include "cryomux/fit/tls_fit.hpp"
#include "cryomux/lossbudget.hpp"
#include "cryomux/muxsim.hpp"
#include "cryomux/resonator.hpp"
#include "cryomux/rfnet.hpp"

namespace cryomux::chain {

struct AttenuatorStage {
  double db = 0.0;
};

struct MuxStage {
  mux::MuxConfig config{};
  std::size_t path_port = 0;                  // branch the signal travels through
  std::optional<std::size_t> selected_port;   // latched selection, empty = all off
  double v_dd = 0.9;
  mux::InterfaceMode mode = mux::InterfaceMode::parallel;

  mux::ControlState control_state() const;
};

struct SampleStage {
  resonator::CavityLerSystem system{};
  // When present, the LER internal loss follows the TLS model at the
  // steady-state photon number instead of system.gamma_r.
  std::optional<loss::TlsModel> tls;
};

struct BandpassStage {
  double f_lo = 4e9;
  double f_hi = 8e9;
  double rejection_db = 60.0;
};

struct AmplifierStage {
  double gain_db = 0.0;
  double noise_temperature_k = 0.0;
};

using Stage = std::variant<AttenuatorStage, MuxStage, SampleStage, BandpassStage, AmplifierStage>;

struct ChainSpec {
  std::vector<Stage> stages;
  std::uint64_t rng_seed = 0;

  void validate() const;
  std::size_t sample_index() const;
  const SampleStage& sample() const;
};

struct SweepSpec {
  // Either an explicit grid, or a grid centred on the dressed resonance
  // spanning +- auto_span_linewidths loaded linewidths.
  std::optional<rfnet::FrequencyGrid> grid;
  double auto_span_linewidths = 10.0;
  std::size_t points_per_trace = 801;
  double instrument_power_dbm = -30.0;
  std::size_t averages = 1;
  double rbw_hz = 1e3;

  void validate() const;
};

/// Complex transmission of one stage. The sample uses the network-analyser
/// sign convention; gamma_r overrides the sample's internal loss.
std::vector<complex> stage_response(const Stage& stage, const rfnet::FrequencyGrid& grid,
                                    std::optional<double> gamma_r = std::nullopt);

/// Product of all non-sample stages: what a through measurement without the
/// device would record.
std::vector<complex> through_response(const ChainSpec& chain, const rfnet::FrequencyGrid& grid);

/// Power incident on the sample (W) at drive frequency f_hz.
double power_at_sample(const ChainSpec& chain, double instrument_power_dbm, double f_hz);
/// Same, evaluated at the sample's dressed resonance.
double power_at_sample(const ChainSpec& chain, double instrument_power_dbm);

/// System noise temperature referred to the first amplifier input (Friis).
double system_noise_temperature(const ChainSpec& chain, double f_hz);

struct SteadyState {
  double n_photons = 0.0;
  double gamma_r = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Photon number and internal loss consistent with each other at resonance.
SteadyState resonator_steady_state(const SampleStage& sample, double p_in_w);

struct SynthesisResult {
  fit::ComplexTrace trace;
  std::vector<std::string> warnings;
  SteadyState steady_state;
  double p_sample_w = 0.0;
};

rfnet::FrequencyGrid sweep_grid(const ChainSpec& chain, const SweepSpec& sweep,
                                std::optional<double> gamma_r = std::nullopt);

/// Deterministic for a given chain.rng_seed.
SynthesisResult synthesize_sweep(const ChainSpec& chain, const SweepSpec& sweep);

struct PowerSeriesEntry {
  double instrument_power_dbm = 0.0;
  double p_sample_w = 0.0;
  double n_photons = 0.0;
  std::optional<fit::SpectrumFit> fit;
  bool converged = false;
  std::string message;
};

struct PowerSeriesResult {
  std::vector<PowerSeriesEntry> entries;
  std::optional<fit::TlsFit> tls_fit;

  std::vector<fit::PowerSweepPoint> sweep_points() const;
};

struct PowerSeriesOptions {
  bool fit_tls = true;
  bool parallel = true;
};

/// Synthesises and fits one sweep per instrument power. Each power gets its
/// own seed derived from chain.rng_seed and its index; results keep input
/// order.
PowerSeriesResult run_power_series(const ChainSpec& chain, const SweepSpec& sweep,
                                   const std::vector<double>& power_list_dbm,
                                   const PowerSeriesOptions& options = {});

/// Divides a measured trace by the chain's through response.
fit::ComplexTrace normalize_by_through(const ChainSpec& chain, const fit::ComplexTrace& trace);

}  // namespace cryomux::chain
