#pragma once

#include <ostream>

namespace sidelink::cli {

/// Exit statuses of the sidelink_sim tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitCapacityExceeded = 2,
};

/// Entry point of the `sidelink_sim` tool, callable in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sidelink::cli
