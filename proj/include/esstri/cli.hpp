#pragma once

#include <ostream>

namespace esstri::cli {

/// Exit codes of `certify`: 0 yes, 1 no, 2 unknown.  Errors of any
/// subcommand exit with 3.
constexpr int exit_error = 3;

/// Environment variable holding default budget overrides ("key=value,...").
constexpr const char* budget_env = "ESSTRI_BUDGET";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace esstri::cli
