#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pedacc::cli {

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pedacc::cli
