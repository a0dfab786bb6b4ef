#pragma once

#include <string>
#include <vector>

namespace forage {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runtime invariant checks: conservation, recurrence, monotone death, determinism,
/// gradient agreement and population size. Cheap enough to run from the CLI.
std::vector<CheckResult> run_invariant_suite();

}  // namespace forage
