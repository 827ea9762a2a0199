#pragma once

#include <iosfwd>

namespace tdabm::cli {

/// Exit codes: 0 success, 1 runtime or data error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `tdabm` binary, with injectable streams for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tdabm::cli
