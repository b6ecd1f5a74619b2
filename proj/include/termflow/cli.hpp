#pragma once

// The `termflow` command line as a library call, so the executable and the
// test suites drive the same code.
//
// Exit codes: 0 success, 1 internal error, 2 parse error (instance files and
// the command line itself), 3 precondition violated, 4 budget refused.

#include <string>
#include <vector>

namespace termflow {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitBudget = 4,
};

struct CliOutcome {
  int exit_code = kExitOk;
  std::string out;  // JSON report or help text
  std::string err;  // diagnostics
};

// `args` excludes the program name.
CliOutcome run_cli(const std::vector<std::string>& args);

}  // namespace termflow
