#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsdi {

/// Parses and runs one invocation; `args` excludes the program name.
/// Results go to `out` (or the --out file), diagnostics to `err`.
/// Exit codes: 0 success, 1 domain failure (machine-readable error object)
/// or any validation failure, 2 usage.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qsdi
