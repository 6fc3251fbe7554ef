#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sepind {

enum ExitCode : int {
    kExitOk = 0,
    /// Malformed input, unknown state, out-of-domain parameter, bad range, bad flags.
    kExitInput = 2,
    /// Not Hermitian, or not a density matrix when a verdict is requested.
    kExitNotDensity = 3,
    kExitReconstruction = 4,
};

/// "a:b:step" (inclusive, step > 0, b >= a) or a single value.
std::vector<double> parse_range(const std::string& text);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sepind
