#pragma once

#include <string>
#include <vector>

namespace refrule {

struct CriterionCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<CriterionCheck> checks;
    double seconds = 0.0;
};

struct VerifyOptions {
    // Fast mode shrinks sample sizes for a smoke run; the acceptance gate is
    // the full-size run.
    bool fast = false;
    int threads = 0;
};

// The eight end-to-end checks that gate a release: closed-form moment
// tables, stationary laws, the average-cost solver, the anchor solver,
// pathwise dominance under unit persistence, trade thresholds and welfare,
// quadrature cross-checks, and the dissipativity matrix.
std::vector<CriterionResult> run_verification(const VerifyOptions& options);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace refrule
