#pragma once

#include <iosfwd>

namespace ktree::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kIo = 2,
    kInvariant = 3,
};

/// Entry point of the ktree-lab binary; `out`/`err` stand in for stdout/stderr.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ktree::cli
