#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trawlkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitDegenerate = 4;

/// Runs the command line `args` (args[0] is the program name).
/// Returns 0 on success, 2 on usage errors, 3 on data errors and 4 when an
/// estimate is degenerate.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trawlkit
