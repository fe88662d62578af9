#pragma once

// Command-line front end. run_cli is the whole program: main() forwards to
// it, and the test suite drives it with captured streams. Every subcommand
// writes one structured document to `out` on success and a message naming
// the failing precondition to `err` otherwise.
//
// Exit codes: 0 success, 2 usage error, 3 domain or document validation
// error, 4 numerical singularity.

#include <iosfwd>
#include <string>
#include <vector>

namespace blochlab {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace blochlab
