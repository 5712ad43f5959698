#pragma once

#include <iosfwd>

#include "flagcount_cli/config.hpp"

namespace flagcount::cli {

enum ExitCode : int {
  kOk = 0,
  kToleranceFailure = 1,
  kUsageError = 2,
  kInternalError = 3,
};

// Each command reports results on `out` and progress or errors on `err`.
int cmd_enumerate(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_predict(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(RunConfig const& cfg, std::ostream& out, std::ostream& err);
int cmd_equidist(RunConfig const& cfg, std::ostream& out, std::ostream& err);

// Parses argv (config file first, flags override) and dispatches.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flagcount::cli
