#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdrbac::cli {

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code: 0 when every
/// constraint holds, 1 when some is violated, 2 for unreadable or invalid
/// input, usage errors and undecided (over capacity) results.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdrbac::cli
