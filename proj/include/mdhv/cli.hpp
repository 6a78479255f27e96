#pragma once

#include <iosfwd>

namespace mdhv::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitStatisticalFail = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the mdhv tool; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdhv::cli
