#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rodimpact {

// Outcome of one acceptance criterion. `detail` carries the measured numbers
// behind the verdict so a failure is diagnosable from the report alone.
struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AcceptanceOptions {
    // Directory for the benchmark-scale summary tables the suite produces as
    // a side effect (method comparison, chatter studies, iteration counts,
    // mesh convergence). Empty = no files written.
    std::filesystem::path out_dir;
    // Progress notes (one line per completed run) go here; null = silent.
    std::ostream* progress = nullptr;
};

// Runs the ten-part acceptance suite on the production benchmark: event
// timing, accuracy and energy bands for the coupled and monolithic methods,
// iteration budgets, mesh convergence, chatter mitigation, the library-wide
// property checks, and the mixed-time-step run. Each criterion reports
// independently; expect several minutes of compute.
std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options);

bool all_passed(const std::vector<CriterionResult>& results);

// "criterion N PASS/FAIL name -- detail" lines, one per result.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace rodimpact
