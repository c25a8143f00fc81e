#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace knot {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitVerification = 3 };

// Runs one subcommand (energy, grad, spectrum, bilinear, special, flow, verify, gen). `args` excludes the
// program name. Options may also come from a key=value file given by --config; flags on the command line win.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace knot
