#pragma once

#include <iosfwd>

namespace nvdnp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNotConverged = 3;

// Entry point shared by the executable and the tests. Never calls exit().
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nvdnp::cli
