#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stablematch {

// Command-line driver. `args` excludes the program name. Returns the process
// exit code: 0 success, 1 usage or input error, 2 verification failed under
// --expect-stable, 3 cap exceeded (including the solver iteration cap).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablematch
