#pragma once

#include <vector>

#include "gradnorm/oracle.hpp"
#include "gradnorm/prox.hpp"
#include "gradnorm/report.hpp"
#include "gradnorm/vec.hpp"

namespace gradnorm {

// Result of one adaptive multi-stage run: the candidate solution, the final
// curvature estimate M (nondecreasing across stages), and the ledger split
// into ordinary charges and the extra charges from failed line-search trials.
struct ARResult {
    Vec solution;
    double M = 0.0;
    int stages_run = 0;
    long long gradient_evals = 0;
    long long linesearch_extra_evals = 0;
};

// Smallest M_j = 2^j * M0 (j >= 0) such that the probe point
//   x_pp = x - (1 / (2 (M_j + sigma))) * grad_g(x)
// satisfies g(x_pp) - g(x) - <grad_g(x), x_pp - x> <= ((M_j + sigma)/2) ||x_pp - x||^2,
// where g(u) = f(u) + (sigma/2) ||u - center||^2. Charges one gradient
// evaluation for grad_g(x) (free when f's gradient at x is already cached)
// plus one per failed trial; failures are tallied into extra_evals when given.
double local_line_search(const SmoothObjective& obj, EvalCounter& counter,
                         CachedPoint& cache, double sigma, const Vec& center,
                         const Vec& x, double M0,
                         long long* extra_evals = nullptr);

// Secant curvature probe at x0: picks z0 = x0 + delta * u with
// delta = 1e-2 * max(1, ||x0||) and returns ||grad f(z0) - grad f(x0)|| / delta.
// The direction sequence is deterministic: e1, then the remaining coordinate
// directions, then seeded unit vectors; a zero estimate is resampled up to
// eight times before giving up.
double estimate_initial_M(const SmoothObjective& obj, EvalCounter& counter,
                          CachedPoint& cache, const Vec& x0);

// Adaptive multi-stage run without a known smoothness constant: stages
// quadruple sigma, each solved by the self-terminating subroutine, followed
// by a line search that maintains the running curvature estimate; the run
// stops once sigma_s >= M_s. Returns immediately when
// ||grad f(x0)|| <= eps_for_precheck (the precheck read is charged unless
// cached). Optional trace rows get one entry per stage.
ARResult ar(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
            const SimpleFeasibleRegion& region, const Vec& x0, double sigma1,
            double M0, double eps_for_precheck = 0.0,
            std::vector<StageRow>* trace = nullptr);

struct GuessCheckResult {
    Vec solution;
    int rounds = 0;       // adaptive runs performed
    double D_final = 0.0; // guess in force when the certificate held
    double M0 = 0.0;      // probed initial curvature, shared by all rounds
    double M = 0.0;       // curvature estimate returned by the final round
};

// Distance-guessing driver: rounds t = 1, 2, ... quadruple the guess
// D_t = 4 D_{t-1}, rerun ar(f, x0, eps / (5 D_t), M0) from the same start
// with the same probed M0, and stop once ||grad f(x_hat)|| <= eps. Failed
// rounds are discarded entirely. Optional trace rows get one entry per round.
GuessCheckResult guess_and_check(const SmoothObjective& obj, EvalCounter& counter,
                                 CachedPoint& cache, const Vec& x0, double D0, double eps,
                                 std::vector<StageRow>* trace = nullptr);

}  // namespace gradnorm
