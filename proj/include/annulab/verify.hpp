#pragma once

#include <string>
#include <vector>

namespace annulab {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;   // measured quantity
    double bound = 0.0;   // limit it was held against
    std::string note;
    double seconds = 0.0;
    bool timing = false;  // runtime checks stay out of machine output
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }

    // Deterministic line-delimited form: one line per non-timing check,
    // identical bytes across reruns.
    std::string machine_output() const;
};

// Registry order is the canonical execution order.
std::vector<std::string> suite_names();

SuiteResult run_suite(const std::string& name);

} // namespace annulab
