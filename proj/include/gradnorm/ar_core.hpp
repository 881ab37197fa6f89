#pragma once

#include <vector>

#include "gradnorm/oracle.hpp"
#include "gradnorm/prox.hpp"
#include "gradnorm/report.hpp"

namespace gradnorm {

// Fixed-parameter stage plan. Unconstrained runs certify ||grad f(x_S)||;
// constrained/composite runs certify the projected gradient at eta =
// target_eta = 2L.
struct ARSchedule {
    int stages = 0;
    std::vector<double> sigma;
    std::vector<long long> budgets;
    double target_eta = 0.0;
    double epsilon = 0.0;
    bool constrained = false;
};

// Unconstrained: S = 1 + ceil(log4(LD/eps)), sigma_s = 4^{s-2} eps/D.
// Constrained:   S = 2 + ceil(log4(LD/eps)), sigma_s = 4^{s-3} eps/D.
// Budgets N_s = ceil(8 sqrt(2 c_A L / sigma_s)). eps >= LD degenerates to a
// single stage; the run prechecks x0 first either way.
ARSchedule build_schedule(double L, double D, double epsilon, bool constrained);

// (1-gamma) xbar_prev + gamma x_prev with gamma = 1 - sigma_prev/sigma_next.
Vec update_prox_center(const Vec& xbar_prev, const Vec& x_prev, double sigma_prev,
                       double sigma_next);

// Runs the staged plan: each stage solves the sigma_s-regularized subproblem
// from the previous stage's solution with exactly N_s charged evaluations,
// then the final certificate is evaluated (and charged) at x_S.
SolverReport run_fixed(const SmoothObjective& obj, EvalCounter& counter,
                       const SimpleFeasibleRegion& region, const ARSchedule& schedule,
                       const Vec& x0);

}  // namespace gradnorm
