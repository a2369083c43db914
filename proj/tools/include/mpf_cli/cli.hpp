#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitNotConverged = 3,
  kExitOracleFailed = 4,
};

/// Runs the `mpf` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpf::cli
