#pragma once

#include <iosfwd>

namespace sphlaw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `sphlaw` tool. Writes results to `out` and diagnostics
/// to `err`; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sphlaw::cli
