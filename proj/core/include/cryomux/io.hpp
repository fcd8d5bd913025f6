#pragma once

// File formats. Traces and point lists are CSV; configurations and reports
// are JSON with a top-level "format_version". Physical units are part of the
// field names (_hz, _dbm, _k, ...). Parse failures throw Error(parse_error)
// with the source name plus a line number (CSV) or field path (JSON).

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cryomux/chain.hpp"
#include "cryomux/fit/spectrum_fit.hpp"
#include "cryomux/fit/tls_fit.hpp"
#include "cryomux/lossbudget.hpp"
#include "cryomux/muxsim.hpp"

namespace cryomux::io {

inline constexpr int format_version = 1;

// Environment variable naming a directory searched for relative paths that
// do not exist relative to the working directory.
inline constexpr const char* config_dir_env = "CRYOMUX_CONFIG_DIR";

std::filesystem::path resolve_path(const std::filesystem::path& p);
std::string read_text_file(const std::filesystem::path& p);

// --- CSV ---------------------------------------------------------------

/// Writes `# cryomux trace format_version=1`, a column header and one row per
/// point in %.16e. A sigma column is written when the trace carries one.
void write_trace_csv(std::ostream& os, const fit::ComplexTrace& trace);
fit::ComplexTrace read_trace_csv(std::istream& is, const std::string& source = "<trace>");

/// Columns n_photons,q_loaded,q_uncertainty.
void write_points_csv(std::ostream& os, const std::vector<fit::PowerSweepPoint>& points);
std::vector<fit::PowerSweepPoint> read_points_csv(std::istream& is,
                                                  const std::string& source = "<points>");

/// Columns freq_hz, real/imaginary parts of s11, s21, s12, s22, then s21_db.
void write_sparams_csv(std::ostream& os, const rfnet::SMatrix& s);

// --- JSON --------------------------------------------------------------

/// `base_dir` resolves "config_file" references inside mux stages.
chain::ChainSpec parse_chain(const std::string& text, const std::string& source = "<chain>",
                             const std::filesystem::path& base_dir = {});
chain::SweepSpec parse_sweep(const std::string& text, const std::string& source = "<sweep>");
/// Optional "power_list_dbm" array of a sweep file.
std::vector<double> parse_power_list(const std::string& text, const std::string& source = "<sweep>");
mux::MuxConfig parse_mux_config(const std::string& text, const std::string& source = "<mux>");

struct BudgetComponent {
  std::string name;
  std::string dielectric;
  double participation = 0.0;
  double tan_delta = 0.0;
};

struct BudgetSample {
  std::string name;
  std::vector<BudgetComponent> components;
  std::optional<double> q0;
  std::optional<double> reference_total_loss;
  std::optional<double> reference_q;
};

struct BudgetTable {
  std::vector<BudgetSample> samples;
};

/// Participations are given in percent ("wapr_percent") and loss tangents
/// either inline or by name from the "dielectrics" table.
BudgetTable parse_budget_table(const std::string& text, const std::string& source = "<budget>");

struct BudgetReportRow {
  std::string sample;
  std::vector<std::string> component_names;
  loss::BudgetResult result;
  std::vector<std::string> notes;
};

std::vector<BudgetReportRow> evaluate_budget(const BudgetTable& table);
std::string budget_report_json(const std::vector<BudgetReportRow>& rows);
std::string budget_report_text(const std::vector<BudgetReportRow>& rows);

std::string spectrum_fit_json(const fit::SpectrumFit& fit, std::optional<double> n_photons,
                              std::optional<double> p_sample_w);
std::string tls_fit_json(const fit::TlsFit& fit, std::size_t n_points);
std::string power_series_json(const chain::PowerSeriesResult& result);

/// Shortest round-trippable decimal text for a double.
std::string format_double(double v);

}  // namespace cryomux::io
