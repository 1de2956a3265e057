#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gronwall::cli {

// Runs one CLI invocation. `args` excludes the program name. Writes the
// result document (JSON, CSV, or text per --format) to `out` and diagnostics
// to `err`. Returns the process exit code:
//   0 success, 1 usage error, 2 numeric/internal error, 3 verification
//   mismatch (oracle sweeps, reference-table check).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gronwall::cli
