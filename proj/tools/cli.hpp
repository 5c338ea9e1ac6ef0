#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sparse_ar::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kConvergence = 3 };

/// Runs the command line `args` (without the program name). Results go to
/// files or `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparse_ar::cli
