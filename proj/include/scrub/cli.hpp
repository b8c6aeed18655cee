#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "scrub/error.hpp"

namespace scrub {

enum ExitCode : int {
    EXIT_PASS = 0,
    EXIT_GATE_FAIL = 1,
    EXIT_USAGE = 2,
    EXIT_ENVIRONMENT = 3,
    EXIT_REJECTED = 4,
};

int exit_code_for(ErrorCode code);

// args excludes the program name. Decision/report JSON goes to `out`, logs to stderr.
int run_cli(const std::vector<std::string>& args, std::ostream& out);

}  // namespace scrub
