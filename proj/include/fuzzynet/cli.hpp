#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fuzzynet {

/// Runs the `fnet` command line. `args` excludes the program name.
/// Returns 0 on success, 1 on a domain error (ApiError JSON on `err`),
/// 2 on a usage error.
int cli_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                 std::ostream& err);

}  // namespace fuzzynet
