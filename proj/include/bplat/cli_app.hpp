#pragma once

#include <string>
#include <vector>

namespace bplat {

// Runs the command-line front end.  Exit codes: 0 success, 1 usage or
// configuration error, 2 workspace/domain error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace bplat
