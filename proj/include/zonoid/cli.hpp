#pragma once

#include <iosfwd>

namespace zonoid::cli {

/// Runs one subcommand. Returns 0 on success, 2 when the inputs fail
/// validation (for example a density that is not log-concave where that is
/// required, or a failed certificate), and 1 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zonoid::cli
