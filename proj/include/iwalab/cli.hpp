#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iwalab {

// Exit codes of `iwalab`.
enum ExitCode { kExitOk = 0, kExitInput = 1, kExitFails = 2, kExitInconclusive = 3 };

// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iwalab
