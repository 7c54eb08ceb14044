#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace techspace::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kInputError = 2,
  kComputationError = 3,
  kInternalError = 4,
};

/// Runs the command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace techspace::cli
