#pragma once

#include <map>
#include <string>
#include <vector>

#include "gradnorm/config.hpp"
#include "gradnorm/problems.hpp"
#include "gradnorm/report.hpp"

namespace gradnorm {

// One checked complexity/quality bound, instantiated with the run's observed
// quantities and the instance's ground truth. Rows with enforced = false are
// printed for comparison only and never affect the run's verdict.
struct BoundCheck {
    std::string name;
    double bound = 0.0;
    double observed = 0.0;
    bool pass = false;
    bool enforced = true;
};

struct RunOutcome {
    std::string solver;
    std::string problem_name;
    double epsilon = 0.0;
    SolverReport report;
    std::vector<BoundCheck> bounds;
    // Instance ground truth actually used by the rows above (known_L,
    // known_mu, known_l, f_star, dist_x0 — whichever exist).
    std::map<std::string, double> ground_truth;
};

// Instantiate a test problem from descriptor keys:
//   problem = quadratic | box_quadratic | logistic_1d | cos_quadratic
//   n, seed, spectrum, shift, lower, upper, c
// A one-element spectrum/shift/lower/upper broadcasts to all n coordinates;
// a two-element spectrum with n > 2 gives evenly spaced values between the
// two endpoints. Unknown problem names throw unknown_name.
ProblemInstance problem_from_config(const Config& cfg);

// Start point: explicit x0 list (scalar broadcasts), else deterministic
// placement at start_dist (default 1) from the known optimum using
// start_seed (default 1).
Vec start_from_config(const ProblemInstance& inst, const Config& cfg);

// Run the configured solver (solver = ar_fixed | ar | guess_and_check |
// scar | nascar | run_fixed_nc | gd_baseline) at epsilon (default 1e-3),
// then instantiate every complexity bound the run's ground truth supports.
// Unknown solver names throw unknown_name. gd_baseline is the comparison
// baseline and contributes no bound rows.
RunOutcome run_experiment(const ProblemInstance& inst, const Vec& x0, const Config& cfg);

}  // namespace gradnorm
