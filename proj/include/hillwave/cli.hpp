#pragma once

#include <iosfwd>

namespace hillwave {

/// Command-line entry point. Returns 0 on success, 2 on invalid input, 1 on numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hillwave
