// cli.hpp - command-line entry point (schedule | filter | sweep | diagnose).
#pragma once

#include <ostream>

namespace ddf {

// Exit codes: 0 ok, 2 usage/validation error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ddf
