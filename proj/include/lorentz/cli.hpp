#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lorentz {

/// Exit codes: 0 all requested verdicts hold, 1 a check failed or a computation
/// raised (error embedded in the report), 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lorentz
