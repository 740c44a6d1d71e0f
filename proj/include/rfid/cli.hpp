#pragma once

#include <string>
#include <vector>

namespace rfid {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_computation = 2 };

/// Entry point of the `rfid` tool. Subcommands: simulate, microstructure,
/// project, periodogram, fit, homogeneity, report.
int run(int argc, char** argv);

/// Same, with argv[0] omitted.
int run(const std::vector<std::string>& args);

}  // namespace rfid
