#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oulab::cli {

/// Process exit codes.
enum ExitCode : int {
    ok = 0,
    check_failed = 1,       ///< verify: a moment check fell outside its band
    input_error = 2,        ///< config, CSV or argument problem
    numeric_error = 3,      ///< overflow or ill-conditioned inversion
    not_converged = 4       ///< Cauchy surrogate did not settle before n_max
};

/// Runs `oulab <command> ...`. Diagnostics go to `err`, short progress lines to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace oulab::cli
