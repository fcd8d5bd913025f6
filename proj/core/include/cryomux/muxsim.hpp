#pragma once

// SP4T series-shunt cryo-CMOS multiplexer: digital control interfaces,
// supply-voltage dependent switch network, switching transient and static
// dissipation.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cryomux/rfnet.hpp"

namespace cryomux::mux {

struct SwitchBranch {
  double r_on = 9.5;      // ohm, at nominal supply
  double c_off = 26e-15;  // farad
};

/// Electrical model of the switch network. The defaults reproduce the
/// millikelvin operating point: ~1.6 dB insertion loss and ~34 dB isolation
/// at 6 GHz, and ~-21 dB transmission when unpowered.
struct MuxConfig {
  std::size_t n_ports = 4;
  SwitchBranch branch{};
  double l_match = 450e-12;           // H, series at RFC
  double l_shunt_ground = 200e-12;    // H, in series with each shunt transistor
  double v_dd_nominal = 0.9;          // V
  double v_th = 0.475;                // V
  double subthreshold_slope = 0.025;  // V per decade of conductance
  // Conductance at v_dd = v_th, as a fraction of 1/r_on.
  double knee_conductance_fraction = 1e-3;
  double parasitic_loss_db = 0.8;     // PCB, connectors, bond wires
  std::string temperature_label = "32 mK";

  void validate() const;
};

enum class InterfaceMode { parallel, serial };

struct LineLevels {
  bool d0 = false, d1 = false, le = false, clk = false, si = false, ps = false;

  friend bool operator==(const LineLevels&, const LineLevels&) = default;
};

/// Latched digital state of the multiplexer. Transitions are free functions
/// returning a new value; a ControlState is never mutated in place.
struct ControlState {
  InterfaceMode mode = InterfaceMode::parallel;
  std::optional<std::size_t> latched_selection;
  std::vector<bool> shift_register;
  std::vector<bool> pending_register;
  LineLevels line_levels{};

  static ControlState initial(std::size_t n_ports, InterfaceMode mode = InterfaceMode::parallel);

  std::size_t n_ports() const { return shift_register.size(); }
  // Per-branch "on" flags derived from latched_selection.
  std::vector<bool> branch_states() const;

  friend bool operator==(const ControlState&, const ControlState&) = default;
};

/// Parallel interface write with address bits LSB first. With le_pulse the
/// decoded index is latched; the PS line is sampled at the same edge.
ControlState parallel_write(const ControlState& state, std::span<const bool> address_bits,
                            bool le_pulse);
ControlState parallel_write(const ControlState& state, bool d0, bool d1, bool le_pulse);

/// One rising CLK edge on the serial interface. The first bit shifted in ends
/// up at port 0 after n_ports clocks.
ControlState serial_clock(const ControlState& state, bool si);

/// Rising LE edge: copies the pending register into the latched selection.
/// A multi-hot register is rejected and the input state is left as is.
ControlState latch(const ControlState& state);

/// Drives the PS line; the mode change takes effect on the next latch.
ControlState set_mode_line(const ControlState& state, bool ps_serial);

/// Full programming sequences used by the CLI and the property tests.
ControlState program_parallel(const ControlState& state, std::size_t port);
ControlState program_serial(const ControlState& state, std::optional<std::size_t> port);

double branch_conductance(const MuxConfig& cfg, double v_dd);

/// Two-port response from branch `port` to RFC for the given latched state.
rfnet::SMatrix port_s_params(const MuxConfig& cfg, const ControlState& state, double v_dd,
                             const rfnet::FrequencyGrid& grid, std::size_t port);

/// Responses for every branch port, index = port.
std::vector<rfnet::SMatrix> mux_s_params(const MuxConfig& cfg, const ControlState& state,
                                         double v_dd, const rfnet::FrequencyGrid& grid);

/// Fraction of the final amplitude reached t seconds after a switching event.
double switching_envelope(double tau, double t);
/// Time to reach 95% of the final amplitude.
double rise_time_95(double tau);

/// Envelope time constant versus carrier frequency, linearly interpolated and
/// held constant outside the table.
struct TransientTable {
  std::vector<std::pair<double, double>> samples{{4e9, 0.6e-9}, {6e9, 0.4e-9}};

  double tau_at(double f_hz) const;
};

struct PowerTable {
  // (v_dd [V], i_dd [A]) with strictly increasing v_dd.
  std::vector<std::pair<double, double>> samples;

  void validate() const;
  /// Zero plus the nominal 0.9 V point dissipating 36.2 uW.
  static PowerTable millikelvin_default();
};

double dissipated_power(const PowerTable& table, double v_dd);

double programming_time(std::size_t n_ports, double t_clk, InterfaceMode mode);

}  // namespace cryomux::mux
