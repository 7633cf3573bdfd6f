#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metascope::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
/// Data goes to `out` (or --out files); diagnostics go to `err` only.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metascope::cli
