#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prefadvisor::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitQualityGate = 4,
};

/// Runs the command line `args` (args[0] is the program name) against the
/// given streams and returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace prefadvisor::cli
