#ifndef WPH_CHECKS_HPP
#define WPH_CHECKS_HPP

#include <functional>
#include <string>
#include <vector>

namespace wph {

struct CheckResult {
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// A named acceptance check. With `inject` set the check compares against one
// deliberately wrong expected value, so a passing harness must report failure.
struct AcceptanceCheck {
    std::string name;
    std::string description;
    double time_limit_seconds;
    std::function<CheckResult(bool inject)> run;
};

const std::vector<AcceptanceCheck>& acceptance_suite();

/// Runs one check, timing it and enforcing its time limit.
CheckResult run_check(const AcceptanceCheck& check, bool inject);

} // namespace wph

#endif
