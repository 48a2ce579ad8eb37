#pragma once

#include <ostream>

namespace subres::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kNumeric = 3,
};

/// Entry point for `subres <constants|simulate|envelope|sweep|compare> ...`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subres::cli
