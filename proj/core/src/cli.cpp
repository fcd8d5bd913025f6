#include "cryomux/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cryomux/chain.hpp"
#include "cryomux/error.hpp"
#include "cryomux/fit/stark.hpp"
#include "cryomux/io.hpp"

namespace cryomux::cli {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Writes to a file when a path is given, otherwise to the default stream.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::invalid_input, path + ": cannot open for writing");
  f << text;
}

fs::path parent_of(const fs::path& p) { return io::resolve_path(p).parent_path(); }

chain::ChainSpec load_chain(const std::string& path) {
  return io::parse_chain(io::read_text_file(path), io::resolve_path(path).string(), parent_of(path));
}

chain::SweepSpec load_sweep(const std::string& path) {
  return io::parse_sweep(io::read_text_file(path), io::resolve_path(path).string());
}

fit::ComplexTrace load_trace(const std::string& path) {
  std::istringstream in(io::read_text_file(path));
  return io::read_trace_csv(in, io::resolve_path(path).string());
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

struct SimulateArgs {
  std::string chain, sweep, output, through;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  auto spec = load_chain(a.chain);
  const auto sweep = load_sweep(a.sweep);
  if (a.seed_opt->count()) spec.rng_seed = a.seed;
  const auto result = chain::synthesize_sweep(spec, sweep);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  std::ostringstream os;
  io::write_trace_csv(os, result.trace);
  emit(a.output, os.str(), out);
  if (!a.through.empty()) {
    fit::ComplexTrace through{result.trace.grid, chain::through_response(spec, result.trace.grid), {}};
    std::ostringstream ts;
    io::write_trace_csv(ts, through);
    emit(a.through, ts.str(), out);
  }
  return exit_ok;
}

struct FitSpectrumArgs {
  std::string input, output, chain, sweep;
  double p_in_dbm = 0.0;
  CLI::Option* p_in_opt = nullptr;
};

int cmd_fit_spectrum(const FitSpectrumArgs& a, std::ostream& out, std::ostream& err) {
  auto trace = load_trace(a.input);
  std::optional<chain::ChainSpec> spec;
  if (!a.chain.empty()) {
    spec = load_chain(a.chain);
    trace = chain::normalize_by_through(*spec, trace);
  }
  fit::SpectrumFit result;
  try {
    result = fit::fit_spectrum(trace);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::poor_window) throw;
    ojson partial;
    partial["format_version"] = io::format_version;
    partial["converged"] = false;
    partial["message"] = e.what();
    emit(a.output, dump(partial), out);
    err << "error: " << e.what() << '\n';
    return exit_unconverged;
  }

  std::optional<double> p_sample;
  if (a.p_in_opt->count()) {
    p_sample = dbm_to_watts(a.p_in_dbm);
  } else if (spec && !a.sweep.empty()) {
    const auto sweep = load_sweep(a.sweep);
    p_sample = chain::power_at_sample(*spec, sweep.instrument_power_dbm, result.params.f_r);
  }
  std::optional<double> n;
  if (p_sample && result.converged()) n = fit::photon_axis(*p_sample, result, result.params.f_r);
  emit(a.output, io::spectrum_fit_json(result, n, p_sample), out);
  if (!result.converged()) {
    err << "error: spectrum fit did not converge: " << result.result.message << '\n';
    return exit_unconverged;
  }
  return exit_ok;
}

struct FitPowerArgs {
  std::string input, output;
  double q_c = 0.0;
  CLI::Option* q_c_opt = nullptr;
};

int cmd_fit_power(const FitPowerArgs& a, std::ostream& out, std::ostream& err) {
  std::istringstream in(io::read_text_file(a.input));
  const auto points = io::read_points_csv(in, io::resolve_path(a.input).string());
  std::optional<double> q_c;
  if (a.q_c_opt->count()) q_c = a.q_c;
  const auto result = fit::fit_power_sweep(points, q_c);
  emit(a.output, io::tls_fit_json(result, points.size()), out);
  if (!result.converged()) {
    err << "error: power sweep fit did not converge: " << result.result.message << '\n';
    return exit_unconverged;
  }
  return exit_ok;
}

struct LossBudgetArgs {
  std::string input, output;
  bool text = false;
};

int cmd_loss_budget(const LossBudgetArgs& a, std::ostream& out) {
  const auto table = io::parse_budget_table(io::read_text_file(a.input),
                                            io::resolve_path(a.input).string());
  const auto rows = io::evaluate_budget(table);
  emit(a.output, a.text ? io::budget_report_text(rows) : io::budget_report_json(rows), out);
  return exit_ok;
}

struct StarkArgs {
  double chi = 0.0, nu_r = 0.0, nu_q = 0.0, delta_ac = 0.0, temp = 0.0;
  CLI::Option *nu_q_opt = nullptr, *delta_opt = nullptr, *temp_opt = nullptr;
  std::string output;
};

int cmd_stark(const StarkArgs& a, std::ostream& out) {
  fit::StarkContext ctx;
  ctx.chi = a.chi;
  ctx.nu_r = a.nu_r;
  if (a.nu_q_opt->count()) ctx.nu_q = a.nu_q;
  ctx.validate();

  ojson root;
  root["format_version"] = io::format_version;
  root["chi_hz"] = ctx.chi;
  root["nu_r_hz"] = ctx.nu_r;
  if (ctx.nu_q) root["nu_q_hz"] = *ctx.nu_q;
  if (a.delta_opt->count()) {
    const auto inv = fit::stark_invert(ctx, a.delta_ac);
    root["delta_ac_hz"] = a.delta_ac;
    root["n_mean"] = inv.n_mean;
    root["temperature_resonator_k"] = inv.temperature_k;
    if (ctx.nu_q) {
      root["temperature_qubit_k"] =
          fit::stark_invert(ctx, a.delta_ac, fit::TemperatureConvention::qubit).temperature_k;
    }
  } else {
    root["temperature_k"] = a.temp;
    const double delta = fit::stark_forward_closed_form(ctx, a.temp);
    root["delta_ac_hz"] = delta;
    root["delta_ac_sum_hz"] = fit::stark_forward(ctx, a.temp);
    root["n_mean"] = delta / (2.0 * ctx.chi);
  }
  emit(a.output, dump(root), out);
  return exit_ok;
}

struct MuxArgs {
  std::string mode = "parallel", config, csv, output;
  std::size_t port = 0;
  double vdd = 0.0, tclk = 1e-8;
  double f_start = 4e9, f_stop = 8e9;
  std::size_t points = 41;
  CLI::Option* vdd_opt = nullptr;
};

int cmd_mux_program(const MuxArgs& a, std::ostream& out) {
  mux::MuxConfig cfg;
  if (!a.config.empty()) {
    cfg = io::parse_mux_config(io::read_text_file(a.config), io::resolve_path(a.config).string());
  }
  const auto mode = a.mode == "serial" ? mux::InterfaceMode::serial : mux::InterfaceMode::parallel;
  const double v_dd = a.vdd_opt->count() ? a.vdd : cfg.v_dd_nominal;

  auto state = mux::ControlState::initial(cfg.n_ports, mode);
  state = mode == mux::InterfaceMode::serial ? mux::program_serial(state, a.port)
                                             : mux::program_parallel(state, a.port);
  const auto grid = rfnet::FrequencyGrid::linspace(a.f_start, a.f_stop, a.points);
  const auto all = mux::mux_s_params(cfg, state, v_dd, grid);

  ojson root;
  root["format_version"] = io::format_version;
  root["mode"] = a.mode;
  root["selected_port"] = *state.latched_selection;
  root["branch_states"] = state.branch_states();
  root["v_dd_v"] = v_dd;
  root["t_clk_s"] = a.tclk;
  root["programming_time_s"] = mux::programming_time(cfg.n_ports, a.tclk, mode);
  try {
    root["dissipated_power_w"] = mux::dissipated_power(mux::PowerTable::millikelvin_default(), v_dd);
  } catch (const Error&) {
    root["dissipated_power_w"] = nullptr;
  }
  const auto six = rfnet::FrequencyGrid::single(6e9);
  const auto at6 = mux::mux_s_params(cfg, state, v_dd, six);
  ojson ports = ojson::array();
  for (std::size_t k = 0; k < at6.size(); ++k) {
    ports.push_back({{"port", k}, {"s21_db_6ghz", s_to_db(at6[k][0].s21)}});
  }
  root["ports"] = ports;
  // Isolation as measured on hardware: every branch shunted.
  const auto all_off = mux::ControlState::initial(cfg.n_ports, mode);
  root["isolation_db_6ghz"] = -s_to_db(mux::port_s_params(cfg, all_off, v_dd, six, a.port)[0].s21);
  bool clamped = false;
  for (const auto& s : all) clamped = clamped || s.clamped();
  root["clamped"] = clamped;
  if (!a.csv.empty()) {
    std::ostringstream os;
    io::write_sparams_csv(os, all[a.port]);
    emit(a.csv, os.str(), out);
    root["sparams_csv"] = a.csv;
  }
  emit(a.output, dump(root), out);
  return exit_ok;
}

struct PowerSeriesArgs {
  std::string chain, sweep, output, points_csv;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  bool sequential = false;
};

int cmd_power_series(const PowerSeriesArgs& a, std::ostream& out, std::ostream& err) {
  auto spec = load_chain(a.chain);
  const auto sweep = load_sweep(a.sweep);
  if (a.seed_opt->count()) spec.rng_seed = a.seed;
  const auto powers = io::parse_power_list(io::read_text_file(a.sweep), a.sweep);
  if (powers.empty()) {
    throw Error(ErrorKind::parse_error,
                a.sweep + ": field 'power_list_dbm': required for power-series");
  }
  chain::PowerSeriesOptions opts;
  opts.parallel = !a.sequential;
  const auto result = chain::run_power_series(spec, sweep, powers, opts);
  emit(a.output, io::power_series_json(result), out);
  if (!a.points_csv.empty()) {
    std::ostringstream os;
    io::write_points_csv(os, result.sweep_points());
    emit(a.points_csv, os.str(), out);
  }
  bool ok = result.tls_fit && result.tls_fit->converged();
  for (const auto& e : result.entries) {
    if (!e.converged) {
      err << "warning: fit at " << e.instrument_power_dbm << " dBm did not converge: " << e.message
          << '\n';
      ok = false;
    }
  }
  return ok ? exit_ok : exit_unconverged;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cryomux: cryo-CMOS multiplexed resonator characterisation toolkit", "cryomux"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Synthesise a noisy S21 sweep through a chain");
  s->add_option("--chain", sim.chain, "Chain JSON")->required();
  s->add_option("--sweep", sim.sweep, "Sweep JSON")->required();
  s->add_option("-o,--output", sim.output, "Trace CSV (default stdout)");
  s->add_option("--through", sim.through, "Also write the noiseless through response here");
  sim.seed_opt = s->add_option("--seed", sim.seed, "Override the chain's rng_seed");

  FitSpectrumArgs fs_args;
  auto* f = app.add_subcommand("fit-spectrum", "Fit the generalised Lorentzian to a trace");
  f->add_option("input", fs_args.input, "Trace CSV")->required();
  f->add_option("-o,--output", fs_args.output, "Report JSON (default stdout)");
  f->add_option("--chain", fs_args.chain, "Normalise by this chain's through response");
  f->add_option("--sweep", fs_args.sweep, "Sweep JSON giving the instrument power (needs --chain)");
  fs_args.p_in_opt =
      f->add_option("--p-in-dbm", fs_args.p_in_dbm, "Power at the sample for the photon number");

  FitPowerArgs fp;
  auto* p = app.add_subcommand("fit-power", "Fit the TLS saturation model to Q versus photons");
  p->add_option("input", fp.input, "Points CSV (n_photons,q_loaded,q_uncertainty)")->required();
  p->add_option("-o,--output", fp.output, "Report JSON (default stdout)");
  fp.q_c_opt = p->add_option("--q-c", fp.q_c, "Coupling |Q_c|: fit internal instead of loaded Q");

  LossBudgetArgs lb;
  auto* l = app.add_subcommand("loss-budget", "Participation-ratio loss budget");
  l->add_option("input", lb.input, "Component table JSON")->required();
  l->add_option("-o,--output", lb.output, "Report (default stdout)");
  l->add_flag("--text", lb.text, "Plain-text table instead of JSON");

  StarkArgs st;
  auto* k = app.add_subcommand("stark", "ac-Stark shift thermometry");
  k->add_option("--chi", st.chi, "Dispersive shift chi (Hz, signed)")->required();
  k->add_option("--nu-r", st.nu_r, "Readout resonator frequency (Hz)")->required();
  st.nu_q_opt = k->add_option("--nu-q", st.nu_q, "Qubit frequency (Hz)");
  st.delta_opt = k->add_option("--delta-ac", st.delta_ac, "Measured ac-Stark shift (Hz)");
  st.temp_opt = k->add_option("--temp", st.temp, "Resonator temperature (K)");
  st.delta_opt->excludes(st.temp_opt);
  k->add_option("-o,--output", st.output, "Report JSON (default stdout)");

  MuxArgs mx;
  auto* m = app.add_subcommand("mux-program", "Program the multiplexer and report its response");
  m->add_option("--mode", mx.mode, "Control interface")
      ->check(CLI::IsMember({"parallel", "serial"}));
  m->add_option("--port", mx.port, "Branch to select")->required();
  mx.vdd_opt = m->add_option("--vdd", mx.vdd, "Supply voltage (V)");
  m->add_option("--tclk", mx.tclk, "Control clock period (s)");
  m->add_option("--config", mx.config, "Mux config JSON");
  m->add_option("--csv", mx.csv, "Write S-parameters of the selected path here");
  m->add_option("--f-start", mx.f_start, "Sweep start (Hz)");
  m->add_option("--f-stop", mx.f_stop, "Sweep stop (Hz)");
  m->add_option("--points", mx.points, "Sweep points");
  m->add_option("-o,--output", mx.output, "Summary JSON (default stdout)");

  PowerSeriesArgs ps;
  auto* w = app.add_subcommand("power-series", "Synthesise and fit a sweep per drive power");
  w->add_option("--chain", ps.chain, "Chain JSON")->required();
  w->add_option("--sweep", ps.sweep, "Sweep JSON with power_list_dbm")->required();
  w->add_option("-o,--output", ps.output, "Report JSON (default stdout)");
  w->add_option("--points-csv", ps.points_csv, "Also write the (n, Q_L) points CSV here");
  ps.seed_opt = w->add_option("--seed", ps.seed, "Override the chain's rng_seed");
  w->add_flag("--sequential", ps.sequential, "Run the powers one after another");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_bad_input;
  }

  try {
    if (*s) return cmd_simulate(sim, out, err);
    if (*f) return cmd_fit_spectrum(fs_args, out, err);
    if (*p) return cmd_fit_power(fp, out, err);
    if (*l) return cmd_loss_budget(lb, out);
    if (*k) {
      if (!st.delta_opt->count() && !st.temp_opt->count()) {
        err << "error: stark needs --delta-ac or --temp\n";
        return exit_bad_input;
      }
      return cmd_stark(st, out);
    }
    if (*m) return cmd_mux_program(mx, out);
    if (*w) return cmd_power_series(ps, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_bad_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_bad_input;
  }
  return exit_bad_input;
}

}  // namespace cryomux::cli
