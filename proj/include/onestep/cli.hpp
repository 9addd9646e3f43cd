#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onestep::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;  ///< simulation or I/O failure
inline constexpr int kExitUsage = 2;    ///< bad flags, unreadable or invalid model

/// Runs the tool with `args` (without the program name). Artifacts named
/// "-" go to `out`; diagnostics go to `err`. Output files are written only
/// once the artifact is complete.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace onestep::cli
