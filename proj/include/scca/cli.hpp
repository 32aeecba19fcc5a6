#pragma once

namespace scca {

// Full command-line driver (simulate / solve / benchmark / pareto).
// Returns the process exit code: 0 success, 1 usage or config error,
// 2 numerical failure.
int run_cli(int argc, char** argv);

}  // namespace scca
