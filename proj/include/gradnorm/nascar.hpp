#pragma once

#include "gradnorm/oracle.hpp"
#include "gradnorm/report.hpp"
#include "gradnorm/vec.hpp"

namespace gradnorm {

// F(x) = f(x) + l ||x - center||^2 (note: coefficient l, not l/2), sharing
// f's raw oracles so each F-gradient costs exactly one f-gradient call.
SmoothObjective proximal_objective(const SmoothObjective& obj, double l, Vec center);

// One-step acceptance test: grad_norm_new^2 <= 10 l (f_prev - f_new).
bool accept_step(double l, double f_prev, double f_new, double grad_norm_new);

// Fixed-parameter proximal-point driver with known curvature bounds
// 0 < l <= L: outer step i minimizes F(x) = f(x) + l ||x - x^{i-1}||^2 to
// inner tolerance eps/4 with (mu0, M0) = (l, L + 2l), accepting every inner
// solution, until ||grad f(x^i)|| <= eps. An inner FALSE flag means the
// supplied l was not a lower-curvature constant.
SolverReport run_fixed_nc(const SmoothObjective& obj, EvalCounter& counter, const Vec& x0,
                          double l, double L, double eps);

// Fully parameter-free driver: a secant probe sets the curvature scale M0,
// the initialization phase searches l_1 = 4^{j1} M0 by quadrupling upward
// until the conditions to proceed (inner TRUE and accept_step) hold, or
// quartering downward while they keep holding; main iterations only ever
// increase l. Terminates once ||grad f|| <= eps at an outer iterate (any
// trial point that already meets the tolerance is returned directly).
SolverReport nascar(const SmoothObjective& obj, EvalCounter& counter, const Vec& x0,
                    double eps);

}  // namespace gradnorm
