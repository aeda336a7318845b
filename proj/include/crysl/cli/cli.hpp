#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace crysl::cli {

// Runs the command line `args` (without the program name). Output goes to
// `out`, diagnostics to `err`; the return value is the exit status.
//
//   check-rules --ruleset DIR [--dot TYPE]          0 valid, 1 diagnostics
//   eval-trace  --ruleset DIR [--format F] TRACE    0 ok, 1 violation, 2 error
//   analyze     --ruleset DIR [--format F] [--budget-ms N] [--exclude P]...
//               [--with-timings] PROGRAM            0 clean, 1 findings, 2 error
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crysl::cli
