#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dpass::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kNotPassive = 2,
  kIncomplete = 3,
  kFailed = 4,
};

/// Runs one command line (args[0] is the program name). Reports go to out,
/// diagnostics to err; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpass::cli
