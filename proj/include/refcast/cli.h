#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace refcast {

enum ExitCode : int { kExitOk = 0, kExitDataError = 1, kExitUsage = 2 };

// Runs `refcast <args...>` (args excludes the program name). Payload goes to
// `out`, diagnostics to `err`; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace refcast
