#pragma once

#include "chemo/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace chemo {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitSolver = 2,
    kExitVerifyFailed = 3,
};

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// The invariant suite behind `verify`: G^{-1} round trips, closed forms,
/// a short conservation run, the steady refinement study, the steady-state
/// gradient bound and the lambda = 0 reduced problem.
std::vector<VerifyCheck> verify_suite(const RunConfig& config);

/// Runs one of steady, limit, evolve, sweep or verify, writing its artifacts
/// into config.out_dir. Errors are reported as a JSON object on `err`.
int dispatch(const std::string& subcommand, const RunConfig& config, std::ostream& err);

/// Maps an in-flight exception to an exit code and prints its JSON body.
int report_exception(std::ostream& err);

}  // namespace chemo
