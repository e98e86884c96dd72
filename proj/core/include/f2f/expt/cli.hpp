#pragma once

#include <ostream>

namespace f2f::expt {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

/// Entry point of the `f2f` tool. Subcommands: calibrate, emerge,
/// visibility, oracle, validate-config.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace f2f::expt
