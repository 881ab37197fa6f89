#include "gradnorm/prox.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "gradnorm/error.hpp"

namespace gradnorm {

namespace {

constexpr double kMembershipTol = 1e-12;

// Completing the square, the prox objective is ((sigma+eta)/2)||u - z||^2 up
// to a constant, with z below. Every built-in region minimizes phi plus that
// quadratic in closed form from z.
Vec unconstrained_center(const Vec& g, double sigma, const Vec& xbar, double eta, const Vec& x) {
    const double w = sigma + eta;
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = (sigma * xbar[i] + eta * x[i] - g[i]) / w;
    return z;
}

double zero_value(const Vec&) { return 0.0; }

}  // namespace

SimpleFeasibleRegion make_unconstrained_region() {
    SimpleFeasibleRegion r;
    r.kind = "rn";
    r.composite_prox_oracle = [](const Vec& g, double sigma, const Vec& xbar, double eta,
                                 const Vec& x) {
        return unconstrained_center(g, sigma, xbar, eta, x);
    };
    r.membership_test = [](const Vec& p) { return all_finite(p); };
    r.composite_value = zero_value;
    return r;
}

SimpleFeasibleRegion make_box_region(Vec lower, Vec upper) {
    if (lower.size() != upper.size()) {
        throw Error(ErrorCode::invalid_argument, "box region: bound lengths differ");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] <= upper[i])) {
            throw Error(ErrorCode::invalid_argument, "box region: lower > upper");
        }
    }
    SimpleFeasibleRegion r;
    r.kind = "box";
    r.composite_prox_oracle = [lower, upper](const Vec& g, double sigma, const Vec& xbar,
                                             double eta, const Vec& x) {
        Vec z = unconstrained_center(g, sigma, xbar, eta, x);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::clamp(z[i], lower[i], upper[i]);
        return z;
    };
    r.membership_test = [lower, upper](const Vec& p) {
        if (p.size() != lower.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] < lower[i] - kMembershipTol || p[i] > upper[i] + kMembershipTol) return false;
        }
        return true;
    };
    r.composite_value = zero_value;
    return r;
}

SimpleFeasibleRegion make_ball_region(Vec center, double radius) {
    if (!(radius > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "ball region: radius must be positive");
    }
    SimpleFeasibleRegion r;
    r.kind = "ball";
    r.composite_prox_oracle = [center, radius](const Vec& g, double sigma, const Vec& xbar,
                                               double eta, const Vec& x) {
        Vec z = unconstrained_center(g, sigma, xbar, eta, x);
        const double d = dist(z, center);
        if (d > radius) {
            const double t = radius / d;
            for (std::size_t i = 0; i < z.size(); ++i)
                z[i] = center[i] + t * (z[i] - center[i]);
        }
        return z;
    };
    r.membership_test = [center, radius](const Vec& p) {
        return p.size() == center.size() && dist(p, center) <= radius + kMembershipTol;
    };
    r.composite_value = zero_value;
    return r;
}

SimpleFeasibleRegion make_l1_region(double lambda) {
    if (!(lambda >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "l1 region: lambda must be nonnegative");
    }
    SimpleFeasibleRegion r;
    r.kind = "l1";
    r.composite_prox_oracle = [lambda](const Vec& g, double sigma, const Vec& xbar, double eta,
                                       const Vec& x) {
        Vec z = unconstrained_center(g, sigma, xbar, eta, x);
        const double t = lambda / (sigma + eta);  // soft-threshold width
        for (double& v : z) {
            if (v > t) {
                v -= t;
            } else if (v < -t) {
                v += t;
            } else {
                v = 0.0;
            }
        }
        return z;
    };
    r.membership_test = [](const Vec& p) { return all_finite(p); };
    r.composite_value = [lambda](const Vec& p) {
        double s = 0.0;
        for (double v : p) s += std::abs(v);
        return lambda * s;
    };
    return r;
}

const SimpleFeasibleRegion& unconstrained_region() {
    static const SimpleFeasibleRegion r = make_unconstrained_region();
    return r;
}

Vec perturbed_gradient_mapping(const SimpleFeasibleRegion& region, const Vec& grad_at_x,
                               double eta, double sigma, const Vec& xbar, const Vec& x) {
    if (!(eta > 0.0) || !(sigma >= 0.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "perturbed_gradient_mapping: need eta > 0 and sigma >= 0");
    }
    return region.composite_prox_oracle(grad_at_x, sigma, xbar, eta, x);
}

Vec gradient_mapping(const SimpleFeasibleRegion& region, const Vec& grad_at_x, double eta,
                     const Vec& x) {
    return perturbed_gradient_mapping(region, grad_at_x, eta, 0.0, x, x);
}

ProjectedGradient projected_gradient(const SimpleFeasibleRegion& region, const Vec& grad_at_x,
                                     double eta, const Vec& x) {
    ProjectedGradient pg;
    pg.eta = eta;
    pg.mapped_point = gradient_mapping(region, grad_at_x, eta, x);
    pg.vector.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pg.vector[i] = eta * (x[i] - pg.mapped_point[i]);
    pg.norm = nrm2(pg.vector);
    return pg;
}

}  // namespace gradnorm
