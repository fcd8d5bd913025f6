#include "cryomux/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cryomux/error.hpp"

namespace cryomux::io {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

namespace fs = std::filesystem;

fs::path resolve_path(const fs::path& p) {
  if (p.is_absolute() || fs::exists(p)) return p;
  if (const char* dir = std::getenv(config_dir_env); dir && *dir) {
    const fs::path candidate = fs::path(dir) / p;
    if (fs::exists(candidate)) return candidate;
  }
  return p;
}

std::string read_text_file(const fs::path& p) {
  const fs::path resolved = resolve_path(p);
  std::ifstream in(resolved, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse_error, resolved.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

// --- CSV helpers --------------------------------------------------------

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void csv_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line) + ": " + msg);
}

double parse_field(const std::string& text, const std::string& column, const std::string& source,
                   std::size_t line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != last) {
    csv_fail(source, line, "field '" + column + "': cannot parse '" + text + "' as a number");
  }
  if (!std::isfinite(v)) csv_fail(source, line, "field '" + column + "': value is not finite");
  return v;
}

// Reads the header and data rows of a simple numeric CSV. Comment lines
// start with '#'. Returns the header that matched and the rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvTable read_numeric_csv(std::istream& is, const std::string& source,
                          const std::vector<std::vector<std::string>>& accepted_headers) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto fields = split_commas(stripped);
    if (t.header.empty()) {
      const auto it = std::find(accepted_headers.begin(), accepted_headers.end(), fields);
      if (it == accepted_headers.end()) {
        std::string expected;
        for (const auto& h : accepted_headers) {
          std::string joined;
          for (const auto& c : h) joined += (joined.empty() ? "" : ",") + c;
          expected += (expected.empty() ? "'" : " or '") + joined + "'";
        }
        csv_fail(source, line_no, "header '" + stripped + "' does not match " + expected);
      }
      t.header = fields;
      continue;
    }
    if (fields.size() != t.header.size()) {
      csv_fail(source, line_no,
               "expected " + std::to_string(t.header.size()) + " fields, found " +
                   std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row.push_back(parse_field(fields[c], t.header[c], source, line_no));
    }
    t.rows.push_back(std::move(row));
    t.line_numbers.push_back(line_no);
  }
  if (t.header.empty()) csv_fail(source, line_no, "missing header line");
  if (t.rows.empty()) csv_fail(source, line_no, "no data rows");
  return t;
}

// --- JSON helpers -------------------------------------------------------

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw Error(ErrorKind::parse_error,
                source + ":" + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
}

// Field access with path-qualified diagnostics.
class Node {
 public:
  Node(const json& j, std::string path, const std::string& source)
      : j_(j), path_(std::move(path)), source_(source) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::parse_error, source_ + ": field '" + path_ + "': " + msg);
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

  void require_object() const {
    if (!j_.is_object()) fail("expected an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    require_object();
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items()) {
      if (!allowed.count(k)) child_path_fail(k, "unknown field");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  Node at(const std::string& key) const {
    require_object();
    if (!j_.contains(key)) child_path_fail(key, "missing required field");
    return Node(j_.at(key), join(key), source_);
  }

  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]", source_); }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  double number(const std::string& key) const { return at(key).number(); }
  double number_or(const std::string& key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }
  std::optional<double> optional_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key).number();
  }

  std::size_t index() const {
    if (!j_.is_number_integer() || j_.get<long long>() < 0) fail("expected a non-negative integer");
    return j_.get<std::size_t>();
  }
  std::size_t index_or(const std::string& key, std::size_t fallback) const {
    return has(key) ? at(key).index() : fallback;
  }

  std::uint64_t u64() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<long long>() >= 0)) {
      fail("expected a non-negative integer");
    }
    return j_.get<std::uint64_t>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::string string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? at(key).string() : fallback;
  }

  std::size_t array_size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  void check_format_version() const {
    const Node v = at("format_version");
    if (!v.raw().is_number_integer() || v.raw().get<int>() != format_version) {
      v.fail("unsupported format_version (expected " + std::to_string(format_version) + ")");
    }
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& msg) const {
    throw Error(ErrorKind::parse_error, source_ + ": field '" + join(key) + "': " + msg);
  }

  const json& j_;
  std::string path_;
  const std::string& source_;
};

// Re-raise library validation failures with the offending field path.
template <class F>
auto with_context(const Node& n, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse_error) throw;
    n.fail(e.what());
  }
}

mux::MuxConfig mux_config_from(const Node& n) {
  n.allow_only({"format_version", "n_ports", "r_on_ohm", "c_off_f", "l_match_h",
                "l_shunt_ground_h", "v_dd_nominal_v", "v_th_v", "subthreshold_slope_v",
                "knee_conductance_fraction", "parasitic_loss_db", "temperature_label"});
  mux::MuxConfig c;
  c.n_ports = n.index_or("n_ports", c.n_ports);
  c.branch.r_on = n.number_or("r_on_ohm", c.branch.r_on);
  c.branch.c_off = n.number_or("c_off_f", c.branch.c_off);
  c.l_match = n.number_or("l_match_h", c.l_match);
  c.l_shunt_ground = n.number_or("l_shunt_ground_h", c.l_shunt_ground);
  c.v_dd_nominal = n.number_or("v_dd_nominal_v", c.v_dd_nominal);
  c.v_th = n.number_or("v_th_v", c.v_th);
  c.subthreshold_slope = n.number_or("subthreshold_slope_v", c.subthreshold_slope);
  c.knee_conductance_fraction = n.number_or("knee_conductance_fraction", c.knee_conductance_fraction);
  c.parasitic_loss_db = n.number_or("parasitic_loss_db", c.parasitic_loss_db);
  c.temperature_label = n.string_or("temperature_label", c.temperature_label);
  with_context(n, [&] { c.validate(); return 0; });
  return c;
}

loss::TlsModel tls_from(const Node& n) {
  n.allow_only({"q0", "components"});
  loss::TlsModel m;
  m.q0 = n.has("q0") ? n.number("q0") : std::numeric_limits<double>::infinity();
  const Node comps = n.at("components");
  for (std::size_t i = 0; i < comps.array_size(); ++i) {
    const Node c = comps.at(i);
    c.allow_only({"name", "participation", "tan_delta", "n_c", "beta"});
    loss::LossComponent lc;
    lc.name = c.string_or("name", "component " + std::to_string(i));
    lc.participation = c.number("participation");
    lc.tan_delta = c.number("tan_delta");
    lc.n_c = c.number_or("n_c", lc.n_c);
    lc.beta = c.number_or("beta", lc.beta);
    with_context(c, [&] { lc.validate(); return 0; });
    m.components.push_back(lc);
  }
  with_context(n, [&] { m.validate(); return 0; });
  return m;
}

resonator::CavityLerSystem system_from(const Node& n) {
  n.allow_only({"targets", "rates"});
  if (n.has("targets") == n.has("rates")) n.fail("give exactly one of 'targets' or 'rates'");
  if (n.has("targets")) {
    const Node t = n.at("targets");
    t.allow_only({"f_dressed_hz", "detuning_hz", "kappa_hz", "q_coupling", "q_internal"});
    return with_context(t, [&] {
      return resonator::CavityLerSystem::from_targets(
          t.number("f_dressed_hz"), t.number("detuning_hz"), t.number("kappa_hz"),
          t.number("q_coupling"), t.number("q_internal"));
    });
  }
  // Rates are given as ordinary frequencies (rate / 2 pi).
  const Node r = n.at("rates");
  r.allow_only({"f_cavity_hz", "f_ler_hz", "g_hz", "kappa_i_hz", "kappa_o_hz", "gamma_c_hz",
                "gamma_r_hz"});
  resonator::CavityLerSystem s;
  s.omega_c = hz_to_rad(r.number("f_cavity_hz"));
  s.omega_r = hz_to_rad(r.number("f_ler_hz"));
  s.g = hz_to_rad(r.number("g_hz"));
  s.kappa_i = hz_to_rad(r.number("kappa_i_hz"));
  s.kappa_o = hz_to_rad(r.number("kappa_o_hz"));
  s.gamma_c = hz_to_rad(r.number_or("gamma_c_hz", 0.0));
  s.gamma_r = hz_to_rad(r.number("gamma_r_hz"));
  with_context(r, [&] { return s.validate(); });
  return s;
}

chain::Stage stage_from(const Node& n, const fs::path& base_dir) {
  const std::string type = n.at("type").string();
  if (type == "attenuator") {
    n.allow_only({"type", "db"});
    return chain::AttenuatorStage{n.number("db")};
  }
  if (type == "mux") {
    n.allow_only({"type", "config", "config_file", "path_port", "selected_port", "v_dd_v", "mode"});
    chain::MuxStage m;
    if (n.has("config") && n.has("config_file")) n.fail("give at most one of 'config' or 'config_file'");
    if (n.has("config")) {
      m.config = mux_config_from(n.at("config"));
    } else if (n.has("config_file")) {
      fs::path p = n.at("config_file").string();
      if (p.is_relative() && !base_dir.empty() && fs::exists(base_dir / p)) p = base_dir / p;
      m.config = parse_mux_config(read_text_file(p), resolve_path(p).string());
    }
    m.path_port = n.index_or("path_port", 0);
    if (n.has("selected_port")) m.selected_port = n.at("selected_port").index();
    m.v_dd = n.number_or("v_dd_v", m.config.v_dd_nominal);
    const std::string mode = n.string_or("mode", "parallel");
    if (mode == "parallel") {
      m.mode = mux::InterfaceMode::parallel;
    } else if (mode == "serial") {
      m.mode = mux::InterfaceMode::serial;
    } else {
      n.at("mode").fail("expected 'parallel' or 'serial'");
    }
    return m;
  }
  if (type == "sample") {
    n.allow_only({"type", "system", "tls"});
    chain::SampleStage s;
    s.system = system_from(n.at("system"));
    if (n.has("tls")) s.tls = tls_from(n.at("tls"));
    return s;
  }
  if (type == "bandpass") {
    n.allow_only({"type", "f_lo_hz", "f_hi_hz", "rejection_db"});
    chain::BandpassStage b;
    b.f_lo = n.number_or("f_lo_hz", b.f_lo);
    b.f_hi = n.number_or("f_hi_hz", b.f_hi);
    b.rejection_db = n.number_or("rejection_db", b.rejection_db);
    return b;
  }
  if (type == "amplifier") {
    n.allow_only({"type", "gain_db", "noise_temperature_k"});
    return chain::AmplifierStage{n.number("gain_db"), n.number("noise_temperature_k")};
  }
  n.at("type").fail("unknown stage type '" + type +
                    "' (expected attenuator, mux, sample, bandpass or amplifier)");
}

ojson number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

// --- CSV ---------------------------------------------------------------

void write_trace_csv(std::ostream& os, const fit::ComplexTrace& trace) {
  const bool with_sigma = !trace.sigma.empty();
  os << "# cryomux trace format_version=" << format_version << "\n";
  os << (with_sigma ? "freq_hz,s21_re,s21_im,sigma\n" : "freq_hz,s21_re,s21_im\n");
  for (std::size_t i = 0; i < trace.grid.size(); ++i) {
    os << sci(trace.grid[i]) << ',' << sci(trace.s21[i].real()) << ','
       << sci(trace.s21[i].imag());
    if (with_sigma) os << ',' << sci(trace.sigma[i]);
    os << '\n';
  }
}

fit::ComplexTrace read_trace_csv(std::istream& is, const std::string& source) {
  const auto t = read_numeric_csv(is, source,
                                  {{"freq_hz", "s21_re", "s21_im"},
                                   {"freq_hz", "s21_re", "s21_im", "sigma"}});
  std::vector<double> f;
  std::vector<complex> s21;
  std::vector<double> sigma;
  const bool with_sigma = t.header.size() == 4;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    if (!(r[0] > 0.0)) csv_fail(source, t.line_numbers[i], "field 'freq_hz': must be positive");
    if (!f.empty() && !(r[0] > f.back())) {
      csv_fail(source, t.line_numbers[i], "field 'freq_hz': frequencies must strictly increase");
    }
    if (with_sigma && !(r[3] > 0.0)) {
      csv_fail(source, t.line_numbers[i], "field 'sigma': must be positive");
    }
    f.push_back(r[0]);
    s21.emplace_back(r[1], r[2]);
    if (with_sigma) sigma.push_back(r[3]);
  }
  return fit::ComplexTrace{rfnet::FrequencyGrid(std::move(f)), std::move(s21), std::move(sigma)};
}

void write_points_csv(std::ostream& os, const std::vector<fit::PowerSweepPoint>& points) {
  os << "# cryomux power sweep format_version=" << format_version << "\n";
  os << "n_photons,q_loaded,q_uncertainty\n";
  for (const auto& p : points) {
    os << sci(p.n_photons) << ',' << sci(p.q_loaded) << ',' << sci(p.q_uncertainty) << '\n';
  }
}

std::vector<fit::PowerSweepPoint> read_points_csv(std::istream& is, const std::string& source) {
  const auto t = read_numeric_csv(is, source, {{"n_photons", "q_loaded", "q_uncertainty"}});
  std::vector<fit::PowerSweepPoint> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    fit::PowerSweepPoint p{t.rows[i][0], t.rows[i][1], t.rows[i][2]};
    try {
      p.validate();
    } catch (const Error& e) {
      csv_fail(source, t.line_numbers[i], e.what());
    }
    out.push_back(p);
  }
  return out;
}

void write_sparams_csv(std::ostream& os, const rfnet::SMatrix& s) {
  os << "# cryomux s-parameters z0_ohm=" << format_double(s.z0())
     << " format_version=" << format_version << "\n";
  os << "freq_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im,s21_db\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& e = s[i];
    os << sci(s.grid()[i]);
    for (const complex v : {e.s11, e.s21, e.s12, e.s22}) {
      os << ',' << sci(v.real()) << ',' << sci(v.imag());
    }
    os << ',' << sci(s_to_db(e.s21)) << '\n';
  }
}

// --- JSON input --------------------------------------------------------

mux::MuxConfig parse_mux_config(const std::string& text, const std::string& source) {
  const json j = parse_json_text(text, source);
  const Node root(j, "", source);
  root.require_object();
  root.check_format_version();
  return mux_config_from(root);
}

chain::ChainSpec parse_chain(const std::string& text, const std::string& source,
                             const fs::path& base_dir) {
  const json j = parse_json_text(text, source);
  const Node root(j, "", source);
  root.allow_only({"format_version", "description", "rng_seed", "stages"});
  root.check_format_version();
  chain::ChainSpec spec;
  if (root.has("rng_seed")) spec.rng_seed = root.at("rng_seed").u64();
  const Node stages = root.at("stages");
  for (std::size_t i = 0; i < stages.array_size(); ++i) {
    spec.stages.push_back(stage_from(stages.at(i), base_dir));
  }
  with_context(stages, [&] { spec.validate(); return 0; });
  return spec;
}

chain::SweepSpec parse_sweep(const std::string& text, const std::string& source) {
  const json j = parse_json_text(text, source);
  const Node root(j, "", source);
  root.allow_only({"format_version", "description", "instrument_power_dbm", "averages", "rbw_hz",
                   "points_per_trace", "auto_span_linewidths", "grid", "power_list_dbm"});
  root.check_format_version();
  chain::SweepSpec s;
  s.instrument_power_dbm = root.number_or("instrument_power_dbm", s.instrument_power_dbm);
  s.averages = root.index_or("averages", s.averages);
  s.rbw_hz = root.number_or("rbw_hz", s.rbw_hz);
  s.points_per_trace = root.index_or("points_per_trace", s.points_per_trace);
  s.auto_span_linewidths = root.number_or("auto_span_linewidths", s.auto_span_linewidths);
  if (root.has("grid")) {
    const Node g = root.at("grid");
    g.allow_only({"start_hz", "stop_hz", "points"});
    s.grid = with_context(g, [&] {
      return rfnet::FrequencyGrid::linspace(g.number("start_hz"), g.number("stop_hz"),
                                            g.at("points").index());
    });
  }
  with_context(root, [&] { s.validate(); return 0; });
  return s;
}

std::vector<double> parse_power_list(const std::string& text, const std::string& source) {
  const json j = parse_json_text(text, source);
  const Node root(j, "", source);
  root.require_object();
  std::vector<double> out;
  if (!root.has("power_list_dbm")) return out;
  const Node list = root.at("power_list_dbm");
  for (std::size_t i = 0; i < list.array_size(); ++i) out.push_back(list.at(i).number());
  return out;
}

BudgetTable parse_budget_table(const std::string& text, const std::string& source) {
  const json j = parse_json_text(text, source);
  const Node root(j, "", source);
  root.allow_only({"format_version", "description", "dielectrics", "samples"});
  root.check_format_version();

  std::map<std::string, double> tangents;
  if (root.has("dielectrics")) {
    const Node d = root.at("dielectrics");
    d.require_object();
    for (const auto& [name, value] : d.raw().items()) {
      tangents[name] = d.at(name).number();
    }
  }

  BudgetTable table;
  const Node samples = root.at("samples");
  for (std::size_t i = 0; i < samples.array_size(); ++i) {
    const Node s = samples.at(i);
    s.allow_only({"name", "components", "q0", "reference_total_loss", "reference_q"});
    BudgetSample bs;
    bs.name = s.at("name").string();
    bs.q0 = s.optional_number("q0");
    bs.reference_total_loss = s.optional_number("reference_total_loss");
    bs.reference_q = s.optional_number("reference_q");
    const Node comps = s.at("components");
    for (std::size_t k = 0; k < comps.array_size(); ++k) {
      const Node c = comps.at(k);
      c.allow_only({"name", "dielectric", "wapr_percent", "tan_delta"});
      BudgetComponent bc;
      bc.name = c.at("name").string();
      bc.participation = c.number("wapr_percent") / 100.0;
      if (c.has("tan_delta") == c.has("dielectric")) {
        c.fail("give exactly one of 'tan_delta' or 'dielectric'");
      }
      if (c.has("tan_delta")) {
        bc.tan_delta = c.number("tan_delta");
      } else {
        bc.dielectric = c.at("dielectric").string();
        const auto it = tangents.find(bc.dielectric);
        if (it == tangents.end()) {
          c.at("dielectric").fail("unknown dielectric '" + bc.dielectric + "'");
        }
        bc.tan_delta = it->second;
      }
      if (!(bc.participation >= 0.0 && bc.participation <= 1.0)) {
        c.at("wapr_percent").fail("must lie in [0, 100]");
      }
      if (!(bc.tan_delta >= 0.0)) c.fail("loss tangent must be >= 0");
      bs.components.push_back(bc);
    }
    table.samples.push_back(std::move(bs));
  }
  return table;
}

// --- Reports -----------------------------------------------------------

std::vector<BudgetReportRow> evaluate_budget(const BudgetTable& table) {
  std::vector<BudgetReportRow> rows;
  for (const auto& s : table.samples) {
    BudgetReportRow row;
    row.sample = s.name;
    std::vector<loss::BudgetEntry> entries;
    for (const auto& c : s.components) {
      entries.push_back({c.participation, c.tan_delta});
      row.component_names.push_back(c.name);
    }
    row.result = loss::budget_total(entries, s.q0);

    char buf[256];
    if (s.reference_total_loss) {
      const double dev = row.result.total_loss / *s.reference_total_loss - 1.0;
      if (std::abs(dev) > 0.02) {
        std::snprintf(buf, sizeof buf, "total loss %.3e deviates %.1f%% from reference %.3e",
                      row.result.total_loss, 100.0 * dev, *s.reference_total_loss);
        row.notes.emplace_back(buf);
      }
    }
    if (s.reference_q && row.result.q_factor) {
      const double q = *row.result.q_factor;
      const double ratio = *s.reference_q / q;
      if (std::abs(ratio - 1.0) > 0.02) {
        const double decades = std::round(std::log10(ratio));
        const double rescaled = ratio / std::pow(10.0, decades);
        if (decades != 0.0 && std::abs(rescaled - 1.0) <= 0.02) {
          std::snprintf(buf, sizeof buf,
                        "reference Q %.2e differs from computed 1/total_loss = %.2e by a factor "
                        "of 1e%+.0f; the reference value is treated as a misprint",
                        *s.reference_q, q, decades);
        } else {
          std::snprintf(buf, sizeof buf, "reference Q %.2e deviates %.1f%% from computed %.2e",
                        *s.reference_q, 100.0 * (ratio - 1.0), q);
        }
        row.notes.emplace_back(buf);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string budget_report_json(const std::vector<BudgetReportRow>& rows) {
  ojson root;
  root["format_version"] = format_version;
  ojson samples = ojson::array();
  for (const auto& r : rows) {
    ojson s;
    s["name"] = r.sample;
    ojson comps = ojson::array();
    for (std::size_t k = 0; k < r.component_names.size(); ++k) {
      comps.push_back({{"name", r.component_names[k]}, {"loss", r.result.component_loss[k]}});
    }
    s["components"] = comps;
    s["total_loss"] = r.result.total_loss;
    s["q_factor"] = number_or_null(r.result.q_factor);
    s["infinite_q"] = r.result.infinite_q();
    s["notes"] = r.notes;
    samples.push_back(s);
  }
  root["samples"] = samples;
  return dump(root);
}

std::string budget_report_text(const std::vector<BudgetReportRow>& rows) {
  std::vector<std::string> names;
  for (const auto& r : rows) {
    for (const auto& n : r.component_names) {
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    }
  }
  std::ostringstream os;
  char buf[64];
  os << std::left << std::setw(18) << "loss";
  for (const auto& r : rows) os << std::setw(12) << r.sample;
  os << '\n';
  for (const auto& n : names) {
    os << std::setw(18) << n;
    for (const auto& r : rows) {
      const auto it = std::find(r.component_names.begin(), r.component_names.end(), n);
      if (it == r.component_names.end()) {
        os << std::setw(12) << "-";
      } else {
        std::snprintf(buf, sizeof buf, "%.2e",
                      r.result.component_loss[static_cast<std::size_t>(it - r.component_names.begin())]);
        os << std::setw(12) << buf;
      }
    }
    os << '\n';
  }
  os << std::setw(18) << "Total loss";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.2e", r.result.total_loss);
    os << std::setw(12) << buf;
  }
  os << '\n' << std::setw(18) << "Q-factor";
  for (const auto& r : rows) {
    if (r.result.q_factor) {
      std::snprintf(buf, sizeof buf, "%.2e", *r.result.q_factor);
    } else {
      std::snprintf(buf, sizeof buf, "inf");
    }
    os << std::setw(12) << buf;
  }
  os << '\n';
  for (const auto& r : rows) {
    for (const auto& note : r.notes) os << "note (" << r.sample << "): " << note << '\n';
  }
  return os.str();
}

std::string spectrum_fit_json(const fit::SpectrumFit& fit, std::optional<double> n_photons,
                              std::optional<double> p_sample_w) {
  const auto& p = fit.params;
  ojson root;
  root["format_version"] = format_version;
  root["converged"] = fit.converged();
  root["message"] = fit.result.message;
  root["iterations"] = fit.result.iterations;
  root["f_r_hz"] = p.f_r;
  root["f_r_stderr_hz"] = fit.result.stderr_of("f_r");
  root["q_loaded"] = p.q_loaded;
  root["q_loaded_stderr"] = fit.result.stderr_of("q_loaded");
  root["q_c_mag"] = p.q_c_mag;
  root["q_c_mag_stderr"] = fit.q_c_mag_stderr;
  root["phi_rad"] = p.phi;
  root["phi_stderr_rad"] = fit.phi_stderr;
  std::optional<double> qi;
  try {
    qi = resonator::q_internal(p.q_loaded, p.q_c_mag);
  } catch (const Error&) {
    qi.reset();
  }
  root["q_internal"] = number_or_null(qi);
  root["peak_s21"] = fit.peak_s21();
  root["a_scale"] = {p.a_scale.real(), p.a_scale.imag()};
  root["b_offset"] = {p.b_offset.real(), p.b_offset.imag()};
  root["reduced_chi_square"] = fit.result.reduced_chi_square;
  root["residual_norm"] = fit.result.residual_norm;
  if (p_sample_w) {
    root["p_sample_w"] = *p_sample_w;
    root["p_sample_dbm"] = watts_to_dbm(*p_sample_w);
  }
  if (n_photons) root["n_photons"] = *n_photons;
  return dump(root);
}

namespace {

ojson tls_fit_object(const fit::TlsFit& fit, std::size_t n_points) {
  ojson root;
  root["converged"] = fit.converged();
  root["message"] = fit.result.message;
  root["iterations"] = fit.result.iterations;
  root["n_points"] = n_points;
  const double ln10 = std::log(10.0);
  root["p_tan_delta"] = fit.p_tan_delta;
  root["p_tan_delta_stderr"] = fit.result.stderr_of("p_tan_delta");
  root["n_c"] = fit.n_c;
  root["n_c_stderr"] = fit.n_c * ln10 * fit.result.stderr_of("log10_n_c");
  root["beta"] = fit.beta;
  root["beta_stderr"] = fit.result.stderr_of("beta");
  root["q0"] = fit.q0;
  root["q0_stderr"] = fit.q0 * ln10 * fit.result.stderr_of("log10_q0");
  root["q_internal_single_photon"] = fit.q_at(1.0);
  root["q_internal_zero_photon"] = fit.q_at(0.0);
  root["reduced_chi_square"] = fit.result.reduced_chi_square;
  ojson comps = ojson::array();
  for (const auto& c : fit.model.components) {
    comps.push_back({{"name", c.name},
                     {"participation", c.participation},
                     {"tan_delta", c.tan_delta},
                     {"n_c", c.n_c},
                     {"beta", c.beta}});
  }
  root["model"] = {{"q0", fit.model.q0}, {"components", comps}};
  return root;
}

}  // namespace

std::string tls_fit_json(const fit::TlsFit& fit, std::size_t n_points) {
  ojson root;
  root["format_version"] = format_version;
  const ojson body = tls_fit_object(fit, n_points);
  for (const auto& [k, v] : body.items()) root[k] = v;
  return dump(root);
}

std::string power_series_json(const chain::PowerSeriesResult& result) {
  ojson root;
  root["format_version"] = format_version;
  ojson entries = ojson::array();
  for (const auto& e : result.entries) {
    ojson o;
    o["instrument_power_dbm"] = e.instrument_power_dbm;
    o["p_sample_w"] = e.p_sample_w;
    o["p_sample_dbm"] = e.p_sample_w > 0.0 ? ojson(watts_to_dbm(e.p_sample_w)) : ojson(nullptr);
    o["converged"] = e.converged;
    o["message"] = e.message;
    if (e.fit) {
      o["n_photons"] = e.n_photons;
      o["f_r_hz"] = e.fit->params.f_r;
      o["q_loaded"] = e.fit->params.q_loaded;
      o["q_loaded_stderr"] = e.fit->result.stderr_of("q_loaded");
      o["q_c_mag"] = e.fit->params.q_c_mag;
    }
    entries.push_back(o);
  }
  root["entries"] = entries;
  root["tls_fit"] =
      result.tls_fit ? tls_fit_object(*result.tls_fit, result.sweep_points().size()) : ojson(nullptr);
  return dump(root);
}

}  // namespace cryomux::io
