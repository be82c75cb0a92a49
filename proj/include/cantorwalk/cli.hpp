#pragma once

#include <ostream>

namespace cantorwalk {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitValidation = 1,
    kExitNumerical = 2,
};

/// Entry point of the `cantorwalk` tool. Writes CSV files under --out and
/// human-readable summaries to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cantorwalk
