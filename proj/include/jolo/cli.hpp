#pragma once

#include <string>
#include <vector>

namespace jolo {

// Full command-line entry point; args excludes the program name. Returns the
// process exit code: 0 success, 2 usage error, 3 data/validation error,
// 4 numerical failure.
int run_pipeline(const std::vector<std::string>& args);

} // namespace jolo
