#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cryomux {

enum class ErrorKind {
  invalid_input,
  numeric_singularity,
  invalid_selection,
  out_of_range,
  dispersive_breakdown,
  nonphysical_internal_loss,
  infinite_q,
  inconsistent_budget,
  poor_window,
  underdetermined,
  nonphysical_population,
  parse_error,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so that
// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::numeric_singularity: return "numeric-singularity";
    case ErrorKind::invalid_selection: return "invalid-selection";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::dispersive_breakdown: return "dispersive-breakdown";
    case ErrorKind::nonphysical_internal_loss: return "nonphysical-internal-loss";
    case ErrorKind::infinite_q: return "infinite-q";
    case ErrorKind::inconsistent_budget: return "inconsistent-budget";
    case ErrorKind::poor_window: return "poor-window";
    case ErrorKind::underdetermined: return "underdetermined";
    case ErrorKind::nonphysical_population: return "nonphysical-population";
    case ErrorKind::parse_error: return "parse-error";
  }
  return "unknown";
}

}  // namespace cryomux
