#pragma once

#include <iosfwd>

namespace gtsc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `gtsc` tool. Data goes to `out` (or the --out file),
/// diagnostics and summaries to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gtsc::cli
