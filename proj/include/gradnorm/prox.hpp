#pragma once

#include <functional>
#include <string>

#include "gradnorm/vec.hpp"

namespace gradnorm {

// Simple feasible region X together with a simple convex term phi, exposed
// through one closed-form oracle:
//
//   composite_prox_oracle(g, sigma, xbar, eta, x)
//     = argmin_{u in X}  <g, u> + phi(u) + (sigma/2)||u - xbar||^2 + (eta/2)||u - x||^2
//
// With sigma = 0 this is the plain composite prox behind the gradient
// mapping; with sigma > 0 it is the perturbed mapping used by the staged
// solvers, absorbing the regularization term exactly.
struct SimpleFeasibleRegion {
    std::function<Vec(const Vec& g, double sigma, const Vec& xbar, double eta, const Vec& x)>
        composite_prox_oracle;
    std::function<bool(const Vec&)> membership_test;
    // phi(u); identically zero for plain sets, lambda*||u||_1 for the
    // soft-threshold region. Needed wherever composite objective values are
    // compared (best-iterate tracking, three-point inequality tests).
    std::function<double(const Vec&)> composite_value;
    std::string kind = "rn";
};

SimpleFeasibleRegion make_unconstrained_region();
SimpleFeasibleRegion make_box_region(Vec lower, Vec upper);
SimpleFeasibleRegion make_ball_region(Vec center, double radius);
SimpleFeasibleRegion make_l1_region(double lambda);

// Shared X = R^n, phi = 0 instance for the unconstrained solvers.
const SimpleFeasibleRegion& unconstrained_region();

// x^{++}(eta, sigma, xbar; x), computed from a gradient the caller already
// owns — mapping evaluations never hide oracle calls.
Vec perturbed_gradient_mapping(const SimpleFeasibleRegion& region, const Vec& grad_at_x,
                               double eta, double sigma, const Vec& xbar, const Vec& x);

// x^+(eta; x) = x^{++}(eta, 0, x; x)
Vec gradient_mapping(const SimpleFeasibleRegion& region, const Vec& grad_at_x, double eta,
                     const Vec& x);

struct ProjectedGradient {
    double eta = 0.0;
    Vec vector;        // eta * (x - x^+(eta; x))
    Vec mapped_point;  // x^+(eta; x)
    double norm = 0.0;
};

// G_eta(x) = eta*(x - x^+(eta; x)); equals grad_at_x exactly when X = R^n
// and phi = 0.
ProjectedGradient projected_gradient(const SimpleFeasibleRegion& region, const Vec& grad_at_x,
                                     double eta, const Vec& x);

}  // namespace gradnorm
