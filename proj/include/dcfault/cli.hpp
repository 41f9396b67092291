#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dcfault {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;     ///< bad flags, config or input files
inline constexpr int kExitPipeline = 3;  ///< simulation or estimation failed

/// Runs the command line `args` (without the program name) and returns the
/// process exit code. Results go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dcfault
