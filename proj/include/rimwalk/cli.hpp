// rimwalk <simulate|converge|sweep|compare|report> [options]
#pragma once

#include <iosfwd>

namespace rimwalk::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidSpec = 2,
  kGaitFailure = 3,
  kIoFailure = 4,
};

/// Parses the command line, runs the experiment and returns the exit code.
/// Regular output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Worker count for sweeps: RIMWALK_THREADS when set to a positive integer,
/// otherwise the hardware concurrency.
unsigned sweep_threads();

}  // namespace rimwalk::cli
