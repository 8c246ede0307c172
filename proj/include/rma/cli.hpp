#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rma::cli {

/// Exit codes: 0 success, 1 budget exhausted or oracle mismatch, 2 invalid
/// parameters (the message names the parameter).
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one ensemble_lab invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Sweep worker count: hardware concurrency, capped by ENSEMBLE_LAB_THREADS.
/// Throws std::invalid_argument if the variable is set but not a positive
/// integer.
int worker_count();

}  // namespace rma::cli
