#include "cryomux/muxsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <string>

#include "cryomux/error.hpp"

namespace cryomux::mux {

using rfnet::AbcdMatrix;
using rfnet::FrequencyGrid;

void MuxConfig::validate() const {
  if (n_ports < 2) throw Error(ErrorKind::invalid_input, "mux needs at least two ports");
  if (!(branch.r_on > 0.0) || !(branch.c_off > 0.0) || !(l_match > 0.0) ||
      !(l_shunt_ground >= 0.0) || !(v_dd_nominal > 0.0) || !(v_th > 0.0) ||
      !(subthreshold_slope > 0.0) || !(knee_conductance_fraction > 0.0) ||
      !(knee_conductance_fraction < 1.0) || !(parasitic_loss_db >= 0.0)) {
    throw Error(ErrorKind::invalid_input, "mux electrical values must be positive");
  }
  if (!(v_th < v_dd_nominal)) {
    throw Error(ErrorKind::invalid_input, "threshold voltage must be below nominal supply");
  }
}

ControlState ControlState::initial(std::size_t n_ports, InterfaceMode mode) {
  if (n_ports < 2) throw Error(ErrorKind::invalid_input, "mux needs at least two ports");
  ControlState s;
  s.mode = mode;
  s.shift_register.assign(n_ports, false);
  s.pending_register.assign(n_ports, false);
  s.line_levels.ps = mode == InterfaceMode::serial;
  return s;
}

std::vector<bool> ControlState::branch_states() const {
  std::vector<bool> on(n_ports(), false);
  if (latched_selection) on.at(*latched_selection) = true;
  return on;
}

namespace {

InterfaceMode mode_from_ps(bool ps) { return ps ? InterfaceMode::serial : InterfaceMode::parallel; }

std::size_t address_width(std::size_t n_ports) {
  return static_cast<std::size_t>(std::bit_width(n_ports - 1));
}

}  // namespace

ControlState parallel_write(const ControlState& state, std::span<const bool> address_bits,
                            bool le_pulse) {
  if (state.mode != InterfaceMode::parallel) {
    throw Error(ErrorKind::invalid_input, "parallel write while in serial mode");
  }
  ControlState next = state;
  if (!address_bits.empty()) next.line_levels.d0 = address_bits[0];
  if (address_bits.size() > 1) next.line_levels.d1 = address_bits[1];
  next.line_levels.le = le_pulse;
  if (!le_pulse) return next;

  std::size_t index = 0;
  for (std::size_t i = 0; i < address_bits.size(); ++i) {
    if (address_bits[i]) index |= std::size_t{1} << i;
  }
  if (index >= state.n_ports()) {
    throw Error(ErrorKind::invalid_selection,
                "decoded port " + std::to_string(index) + " >= " + std::to_string(state.n_ports()));
  }
  next.latched_selection = index;
  next.line_levels.le = false;
  next.mode = mode_from_ps(next.line_levels.ps);
  return next;
}

ControlState parallel_write(const ControlState& state, bool d0, bool d1, bool le_pulse) {
  const bool bits[2] = {d0, d1};
  return parallel_write(state, std::span<const bool>(bits, 2), le_pulse);
}

ControlState serial_clock(const ControlState& state, bool si) {
  ControlState next = state;
  auto& reg = next.pending_register;
  std::shift_left(reg.begin(), reg.end(), 1);
  reg.back() = si;
  next.shift_register = reg;
  next.line_levels.si = si;
  next.line_levels.clk = false;
  return next;
}

ControlState latch(const ControlState& state) {
  const auto hot = std::count(state.pending_register.begin(), state.pending_register.end(), true);
  if (hot > 1) {
    throw Error(ErrorKind::invalid_selection, "pending register is multi-hot");
  }
  ControlState next = state;
  if (hot == 0) {
    next.latched_selection.reset();
  } else {
    const auto it = std::find(state.pending_register.begin(), state.pending_register.end(), true);
    next.latched_selection = static_cast<std::size_t>(it - state.pending_register.begin());
  }
  next.mode = mode_from_ps(next.line_levels.ps);
  next.line_levels.le = false;
  return next;
}

ControlState set_mode_line(const ControlState& state, bool ps_serial) {
  ControlState next = state;
  next.line_levels.ps = ps_serial;
  return next;
}

ControlState program_parallel(const ControlState& state, std::size_t port) {
  if (port >= state.n_ports()) {
    throw Error(ErrorKind::invalid_selection, "port " + std::to_string(port) + " out of range");
  }
  const std::size_t width = std::max<std::size_t>(2, address_width(state.n_ports()));
  // std::vector<bool> has no contiguous storage, so the span needs a real array.
  auto raw = std::make_unique<bool[]>(width);
  for (std::size_t i = 0; i < width; ++i) raw[i] = ((port >> i) & 1U) != 0;
  ControlState s = state;
  if (s.mode != InterfaceMode::parallel) {
    // Release the serial latch with PS low so the next LE edge is parallel.
    s = set_mode_line(s, false);
    s.mode = InterfaceMode::parallel;
  }
  s = parallel_write(s, std::span<const bool>(raw.get(), width), false);
  return parallel_write(s, std::span<const bool>(raw.get(), width), true);
}

ControlState program_serial(const ControlState& state, std::optional<std::size_t> port) {
  if (port && *port >= state.n_ports()) {
    throw Error(ErrorKind::invalid_selection, "port " + std::to_string(*port) + " out of range");
  }
  ControlState s = set_mode_line(state, true);
  s.mode = InterfaceMode::serial;
  for (std::size_t i = 0; i < s.n_ports(); ++i) s = serial_clock(s, port && *port == i);
  return latch(s);
}

double branch_conductance(const MuxConfig& cfg, double v_dd) {
  if (!(v_dd >= 0.0)) throw Error(ErrorKind::invalid_input, "supply voltage must be >= 0");
  const double g_on = 1.0 / cfg.branch.r_on;
  const double g_knee = cfg.knee_conductance_fraction * g_on;
  if (v_dd > cfg.v_th) {
    const double overdrive = std::min(1.0, (v_dd - cfg.v_th) / (cfg.v_dd_nominal - cfg.v_th));
    return g_knee + (g_on - g_knee) * overdrive;
  }
  return g_knee * std::pow(10.0, -(cfg.v_th - v_dd) / cfg.subthreshold_slope);
}

namespace {

struct BranchAdmittance {
  complex series;  // admittance of the series pass transistor
  complex shunt;   // admittance of the shunt leg to ground, incl. ground inductance
};

BranchAdmittance branch_admittance(const MuxConfig& cfg, bool on, double g_drive, double g_off,
                                   double omega) {
  const complex y_c(0.0, omega * cfg.branch.c_off);
  const complex series = (on ? g_drive : g_off) + y_c;
  const complex shunt_transistor = (on ? g_off : g_drive) + y_c;
  const complex z_shunt = 1.0 / shunt_transistor + complex(0.0, omega * cfg.l_shunt_ground);
  return {series, 1.0 / z_shunt};
}

}  // namespace

rfnet::SMatrix port_s_params(const MuxConfig& cfg, const ControlState& state, double v_dd,
                             const FrequencyGrid& grid, std::size_t port) {
  cfg.validate();
  if (state.n_ports() != cfg.n_ports) {
    throw Error(ErrorKind::invalid_input, "control state and config disagree on port count");
  }
  if (port >= cfg.n_ports) throw Error(ErrorKind::invalid_selection, "port out of range");

  const double g_drive = branch_conductance(cfg, v_dd);
  const double g_off = branch_conductance(cfg, 0.0);
  const auto on = state.branch_states();
  const double y_port = 1.0 / rfnet::default_z0;

  std::vector<complex> shunt_in(grid.size()), series(grid.size()), load(grid.size()),
      match(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = hz_to_rad(grid[i]);
    const auto self = branch_admittance(cfg, on[port], g_drive, g_off, omega);
    shunt_in[i] = self.shunt;
    series[i] = 1.0 / self.series;
    // Every other branch hangs off the RFC node, terminated by its own port.
    complex y_load = 0.0;
    for (std::size_t k = 0; k < cfg.n_ports; ++k) {
      if (k == port) continue;
      const auto other = branch_admittance(cfg, on[k], g_drive, g_off, omega);
      y_load += 1.0 / (1.0 / other.series + 1.0 / (other.shunt + y_port));
    }
    load[i] = y_load;
    match[i] = complex(0.0, omega * cfg.l_match);
  }

  const auto parasitic = rfnet::s_to_abcd(rfnet::attenuator(cfg.parasitic_loss_db, grid));
  const auto network = rfnet::cascade({rfnet::shunt_element(shunt_in, grid),
                                       rfnet::series_element(series, grid),
                                       rfnet::shunt_element(load, grid),
                                       rfnet::series_element(match, grid), parasitic});
  return rfnet::abcd_to_s(network);
}

std::vector<rfnet::SMatrix> mux_s_params(const MuxConfig& cfg, const ControlState& state,
                                         double v_dd, const FrequencyGrid& grid) {
  std::vector<rfnet::SMatrix> out;
  out.reserve(cfg.n_ports);
  for (std::size_t p = 0; p < cfg.n_ports; ++p) {
    out.push_back(port_s_params(cfg, state, v_dd, grid, p));
  }
  return out;
}

double switching_envelope(double tau, double t) {
  if (!(tau > 0.0)) throw Error(ErrorKind::invalid_input, "time constant must be positive");
  if (!(t >= 0.0)) return 0.0;
  return -std::expm1(-t / tau);
}

double rise_time_95(double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::invalid_input, "time constant must be positive");
  return tau * std::log(20.0);
}

double TransientTable::tau_at(double f_hz) const {
  if (samples.empty()) throw Error(ErrorKind::invalid_input, "empty transient table");
  auto sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  if (f_hz <= sorted.front().first) return sorted.front().second;
  if (f_hz >= sorted.back().first) return sorted.back().second;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (f_hz <= sorted[i].first) {
      const auto [f0, t0] = sorted[i - 1];
      const auto [f1, t1] = sorted[i];
      return t0 + (t1 - t0) * (f_hz - f0) / (f1 - f0);
    }
  }
  return sorted.back().second;
}

void PowerTable::validate() const {
  if (samples.empty()) throw Error(ErrorKind::invalid_input, "power table is empty");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].second >= 0.0)) {
      throw Error(ErrorKind::invalid_input, "supply current must be >= 0");
    }
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
      throw Error(ErrorKind::invalid_input, "power table voltages must be strictly increasing");
    }
  }
}

PowerTable PowerTable::millikelvin_default() {
  // 36.2 uW at 0.9 V, i.e. ~40.2 uA through the ESD clamps.
  return PowerTable{{{0.0, 0.0}, {0.9, 36.2e-6 / 0.9}}};
}

double dissipated_power(const PowerTable& table, double v_dd) {
  table.validate();
  const auto& s = table.samples;
  if (v_dd < s.front().first || v_dd > s.back().first) {
    throw Error(ErrorKind::out_of_range, "supply voltage outside power table");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (v_dd == s[i].first) return v_dd * s[i].second;
    if (i + 1 < s.size() && v_dd < s[i + 1].first) {
      const double frac = (v_dd - s[i].first) / (s[i + 1].first - s[i].first);
      return v_dd * (s[i].second + frac * (s[i + 1].second - s[i].second));
    }
  }
  return v_dd * s.back().second;
}

double programming_time(std::size_t n_ports, double t_clk, InterfaceMode mode) {
  if (n_ports < 2) throw Error(ErrorKind::invalid_input, "mux needs at least two ports");
  if (!(t_clk > 0.0)) throw Error(ErrorKind::invalid_input, "clock period must be positive");
  return mode == InterfaceMode::serial ? static_cast<double>(n_ports) * t_clk : t_clk;
}

}  // namespace cryomux::mux
