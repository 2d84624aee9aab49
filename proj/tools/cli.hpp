#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bcf::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kInternalError = 3,
};

// Runs the command line (args excludes the program name). Results go to out,
// progress and diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcf::cli
