#pragma once

#include <iosfwd>

namespace rares::cli {

/// Process exit codes; stable across versions.
enum ExitStatus : int {
  kClean = 0,
  kUsageError = 1,
  kViolations = 2,
  kUnrecoverable = 3,
};

/// Entry point behind the rares-sim binary. Reports go to `out`, diagnostics
/// to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rares::cli
