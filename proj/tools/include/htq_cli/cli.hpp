#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace htq::cli {

enum ExitCode : int { kOk = 0, kComputeFailure = 1, kUsageError = 2 };

/// Runs one invocation; `args` excludes the program name.
/// Diagnostics go to `err` as one line prefixed "htq: ".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace htq::cli
