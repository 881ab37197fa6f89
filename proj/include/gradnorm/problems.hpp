#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "gradnorm/oracle.hpp"
#include "gradnorm/prox.hpp"

namespace gradnorm {

// Test problem with ground truth. known_optimum/known_f_star refer to the
// minimum over the instance's region (f + phi); subproblem_oracle, when
// present, returns the exact minimizer of f(u) + phi(u) + (sigma/2)||u-xbar||^2
// over the region.
struct ProblemInstance {
    SmoothObjective objective;
    SimpleFeasibleRegion region;
    double known_L = 0.0;
    double known_mu = 0.0;
    double known_l = 0.0;
    std::optional<Vec> known_optimum;
    std::optional<double> known_f_star;
    std::function<Vec(double sigma, const Vec& xbar)> subproblem_oracle;
    std::string name;
    // Flat key=value descriptor, serializable to the benchmark config format.
    std::map<std::string, std::string> descriptor;
};

// f(x) = (1/2) x'Qx - b'x with Q = R' diag(spectrum) R for a seeded
// orthogonal R (composition of Householder reflections; seed 0 keeps Q
// diagonal). Throws "no finite minimizer" if Q is singular with b outside
// its range.
ProblemInstance make_quadratic(const Vec& spectrum, const Vec& b, std::uint64_t seed);

// Same objective over an axis-aligned box. Q is diagonal when seed == 0,
// in which case the subproblem oracle is the componentwise clamped solve;
// otherwise it falls back to a projected-gradient reference run to 1e-12.
ProblemInstance make_box_quadratic(const Vec& spectrum, const Vec& b, const Vec& lower,
                                   const Vec& upper, std::uint64_t seed);

// f(x) = log(1+e^x) + log(1+e^-x): convex, smooth, not strongly convex.
ProblemInstance make_logistic_1d();

// f(x) = (1/2) x'Qx + c * sum_i (1 - cos x_i): smooth with lower-curvature
// constant c; global minimum 0 at the origin when Q is PSD.
ProblemInstance make_cos_quadratic(const Vec& spectrum, double c, std::uint64_t seed);

// Deterministic start at (approximately) target_dist from known_optimum,
// projected into the region if the raw point falls outside. Callers needing
// the exact distance recompute it against known_optimum.
Vec seeded_start(const ProblemInstance& inst, std::uint64_t seed, double target_dist);

// Serialize the instance descriptor as config-format lines (key = value).
std::string describe(const ProblemInstance& inst);

}  // namespace gradnorm
