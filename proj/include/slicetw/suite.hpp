#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace slicetw {

struct CheckResult {
    std::string name;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
    double seconds = 0;
    double time_limit = 0;
    std::string note;
};

struct SuiteReport {
    unsigned long long seed = 0;
    std::vector<CheckResult> checks;
    bool all_pass = false;

    /// timing is kept out of the canonical JSON so reports are byte-stable
    nlohmann::ordered_json to_json(bool include_timing = false) const;
};

/// Runs the full verification battery. Deterministic for a fixed seed.
SuiteReport run_acceptance_suite(unsigned long long seed = 7);

} // namespace slicetw
