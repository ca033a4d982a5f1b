#pragma once

#include <string>
#include <vector>

namespace fracpar {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // worst observed value vs tolerance
};

// Full property-based acceptance run. Deterministic given the seed: the
// ensemble experiments are executed twice in-process and the reproducibility
// criterion byte-compares the two CSV renderings.
struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    std::string results_csv;    // one row per ensemble trial
    std::string manifest_json;  // schema-versioned run description

    bool all_passed() const {
        for (const auto& c : criteria)
            if (!c.passed) return false;
        return true;
    }
};

AcceptanceReport run_acceptance(unsigned seed = 20260824u);

}  // namespace fracpar
