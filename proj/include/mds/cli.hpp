#pragma once

#include <string>
#include <vector>

namespace mds {

// Runs the command-line interface on the given arguments (excluding the
// program name). Returns the process exit status: 0 on success, 1 when a
// verification fails its tolerance, 2 on usage or input errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace mds
