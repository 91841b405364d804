#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kalikow::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kLimitOrAssertion = 2,
  kIoError = 3,
};

/// Runs one command line (args[0] is the program name). Diagnostics go to
/// `err`, results to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kalikow::cli
