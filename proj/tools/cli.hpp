#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace saola::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

/// Entry point shared by the `saola` binary and the tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace saola::cli
