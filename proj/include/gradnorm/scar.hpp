#pragma once

#include <optional>
#include <vector>

#include "gradnorm/oracle.hpp"
#include "gradnorm/report.hpp"
#include "gradnorm/vec.hpp"

namespace gradnorm {

struct ScarResult {
    Vec solution;
    double M = 0.0;
    bool flag = false;  // TRUE: tolerance met; FALSE: mu0-strong-convexity refuted
    long long restarts = 0;
    double mu_final = 0.0;
    long long gradient_evals = 0;
    // Parameters actually in force at the first round (supplied or probed),
    // plus the entry gradient norm: the observables the complexity bounds
    // are stated in.
    double M0_used = 0.0;
    double mu0_used = 0.0;
    double grad_norm_start = 0.0;
};

struct ScarOptions {
    // On a refuted mu0 the literal prescription outputs the start point y0;
    // the default returns the incumbent with the smallest observed gradient
    // norm instead, which is strictly more useful and affects no guarantee.
    bool literal_false_output = false;
};

// Restarted gradient-norm halving: round t reruns the adaptive multi-stage
// solver with sigma_1 = mu_{t-1}/10 from the previous output. A round that
// fails to halve the gradient norm either quarters mu and repeats from the
// same point (mu0 not supplied) or refutes mu0-strong convexity with
// flag=FALSE (mu0 supplied). Missing mu0/M0 default to a secant curvature
// probe at y0. Optional trace rows get one entry per round.
ScarResult scar(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
                double eps, const Vec& y0, std::optional<double> mu0 = {},
                std::optional<double> M0 = {}, const ScarOptions& options = {},
                std::vector<StageRow>* trace = nullptr);

}  // namespace gradnorm
