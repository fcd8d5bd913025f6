#pragma once

// ac-Stark thermometry: the qubit line shifts by 2 chi per resonator photon,
// so a thermal resonator population shifts it by the Boltzmann-weighted mean
// of 2 chi i.

#include <cstddef>
#include <optional>

namespace cryomux::fit {

struct StarkContext {
  double chi = 0.0;    // Hz, signed
  double nu_r = 0.0;   // Hz, readout resonator
  std::optional<double> nu_q;  // Hz, qubit; alternative temperature convention
  double kappa = 0.0;  // Hz, informational

  void validate() const;
};

enum class TemperatureConvention { resonator, qubit };

/// Shift from the truncated Boltzmann sum. Without `truncation` the sum stops
/// once another term moves the ratio by less than 1e-15.
double stark_forward(const StarkContext& ctx, double temperature_k,
                     std::optional<std::size_t> truncation = std::nullopt);

/// 2 chi x / (1 - x) with x = exp(-h nu_r / k_B T).
double stark_forward_closed_form(const StarkContext& ctx, double temperature_k);

struct StarkInversion {
  double n_mean = 0.0;
  double temperature_k = 0.0;
};

StarkInversion stark_invert(const StarkContext& ctx, double delta_ac_hz,
                            TemperatureConvention convention = TemperatureConvention::resonator);

/// Bose-Einstein temperature of a mode at nu_hz holding n_mean photons.
double temperature_from_population(double n_mean, double nu_hz);

}  // namespace cryomux::fit
