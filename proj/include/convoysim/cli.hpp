#pragma once

#include <iosfwd>

namespace convoysim {

/// Command-line entry point (simulate / sweep / lint / plot).
/// Exit codes: 0 success, 1 lint errors, 2 validation or usage errors,
/// 3 numeric abort during simulation.
int run_cli(int argc, const char* const argv[], std::ostream& out,
            std::ostream& err);

}  // namespace convoysim
