#pragma once

#include <string>
#include <vector>

namespace josephson::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailure = 1,
  kInvalidConfig = 2,
  kNumericalFailure = 3,
};

/// Parses and runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args);

}  // namespace josephson::cli
