#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace badlab::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kInvalid = 2 };

/// Runs `badlab <args...>` (args excludes the program name). Normal output
/// goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace badlab::cli
