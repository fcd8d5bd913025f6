#pragma once

#include <iosfwd>

namespace cryomux::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_bad_input = 2,
  exit_unconverged = 3,
};

/// Entry point of the `cryomux` tool. Reports go to `out` unless a subcommand
/// writes to a file; diagnostics and warnings go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cryomux::cli
