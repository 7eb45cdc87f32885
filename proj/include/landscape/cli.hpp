#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace landscape {

// Runs one command line (program name excluded) and writes results to the
// given streams. Returns the process exit code: 0 on success, 2 on a
// validation error with a diagnostic naming the offending field, 1 on an
// internal error.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace landscape
