#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sine_thurston::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNotConverged = 2,
  kInvalidInput = 3,
  kIoError = 4,
};

/// Runs one command line (args excludes the program name). Results go to `out`,
/// diagnostics to `err`. Precedence: flags, then the --config file, then defaults.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sine_thurston::cli
