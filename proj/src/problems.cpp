#include "gradnorm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "gradnorm/error.hpp"

namespace gradnorm {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_list(const Vec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_double(v[i]);
    }
    return s;
}

// Seeded orthogonal conjugation: R is a product of three Householder
// reflections, so Q = R' diag(d) R needs only O(n) work per matvec and no
// linear-algebra dependency. seed == 0 means R = I (Q stays diagonal).
struct Rotation {
    std::vector<Vec> reflectors;

    static Rotation make(int n, std::uint64_t seed) {
        Rotation rot;
        if (seed != 0) {
            Rng rng(seed);
            for (int k = 0; k < 3; ++k) rot.reflectors.push_back(rng.unit_vector(n));
        }
        return rot;
    }

    // R x (reflectors applied first-to-last)
    Vec apply(Vec x) const {
        for (const Vec& v : reflectors) {
            const double t = 2.0 * dot(v, x);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] -= t * v[i];
        }
        return x;
    }

    // R' x
    Vec apply_transpose(Vec x) const {
        for (auto it = reflectors.rbegin(); it != reflectors.rend(); ++it) {
            const double t = 2.0 * dot(*it, x);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] -= t * (*it)[i];
        }
        return x;
    }
};

struct QuadraticData {
    Vec spectrum;
    Vec b;
    Rotation rot;

    Vec apply_Q(const Vec& x) const {
        Vec y = rot.apply(x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] *= spectrum[i];
        return rot.apply_transpose(std::move(y));
    }

    double value(const Vec& x) const {
        Vec y = rot.apply(x);
        double q = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) q += spectrum[i] * y[i] * y[i];
        return 0.5 * q - dot(b, x);
    }

    Vec grad(const Vec& x) const {
        Vec g = apply_Q(x);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= b[i];
        return g;
    }

    // (Q + sigma I)^{-1} (sigma xbar + b); requires spectrum + sigma > 0.
    Vec shifted_solve(double sigma, const Vec& xbar) const {
        Vec rhs(xbar.size());
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = sigma * xbar[i] + b[i];
        Vec y = rot.apply(rhs);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] /= (spectrum[i] + sigma);
        return rot.apply_transpose(std::move(y));
    }
};

void validate_spectrum(const Vec& spectrum, const Vec& b) {
    if (spectrum.empty()) throw Error(ErrorCode::invalid_argument, "empty spectrum");
    if (spectrum.size() != b.size()) {
        throw Error(ErrorCode::dimension_mismatch, "spectrum and shift lengths differ");
    }
    for (double s : spectrum) {
        if (!(s >= 0.0)) throw Error(ErrorCode::invalid_argument, "spectrum must be nonnegative");
    }
}

// Minimizer of f over R^n: Q^{-1} b, or the minimum-norm solution when Q is
// singular but consistent. Throws when no finite minimizer exists.
Vec unconstrained_minimizer(const QuadraticData& q) {
    Vec rb = q.rot.apply(q.b);
    Vec y(rb.size());
    for (std::size_t i = 0; i < rb.size(); ++i) {
        if (q.spectrum[i] > 0.0) {
            y[i] = rb[i] / q.spectrum[i];
        } else if (rb[i] != 0.0) {
            throw Error(ErrorCode::singular_problem, "no finite minimizer");
        } else {
            y[i] = 0.0;
        }
    }
    return q.rot.apply_transpose(std::move(y));
}

}  // namespace

ProblemInstance make_quadratic(const Vec& spectrum, const Vec& b, std::uint64_t seed) {
    validate_spectrum(spectrum, b);
    const int n = static_cast<int>(spectrum.size());
    auto data = std::make_shared<QuadraticData>(
        QuadraticData{spectrum, b, Rotation::make(n, seed)});

    ProblemInstance inst;
    inst.name = "quadratic";
    inst.objective.dimension = n;
    inst.objective.value_oracle = [data](const Vec& x) { return data->value(x); };
    inst.objective.gradient_oracle = [data](const Vec& x) { return data->grad(x); };
    inst.region = make_unconstrained_region();
    inst.known_L = *std::max_element(spectrum.begin(), spectrum.end());
    inst.known_mu = *std::min_element(spectrum.begin(), spectrum.end());
    inst.known_l = 0.0;
    Vec xstar = unconstrained_minimizer(*data);
    inst.known_f_star = data->value(xstar);
    inst.known_optimum = std::move(xstar);
    inst.subproblem_oracle = [data](double sigma, const Vec& xbar) {
        return data->shifted_solve(sigma, xbar);
    };
    inst.descriptor = {{"problem", "quadratic"},
                       {"n", std::to_string(n)},
                       {"spectrum", join_list(spectrum)},
                       {"shift", join_list(b)},
                       {"seed", std::to_string(seed)}};
    return inst;
}

ProblemInstance make_box_quadratic(const Vec& spectrum, const Vec& b, const Vec& lower,
                                   const Vec& upper, std::uint64_t seed) {
    validate_spectrum(spectrum, b);
    if (lower.size() != spectrum.size() || upper.size() != spectrum.size()) {
        throw Error(ErrorCode::dimension_mismatch, "box bound lengths differ from spectrum");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] < upper[i])) {
            throw Error(ErrorCode::invalid_argument, "box bounds need lower < upper");
        }
    }
    const int n = static_cast<int>(spectrum.size());
    auto data = std::make_shared<QuadraticData>(
        QuadraticData{spectrum, b, Rotation::make(n, seed)});

    ProblemInstance inst;
    inst.name = "box_quadratic";
    inst.objective.dimension = n;
    inst.objective.value_oracle = [data](const Vec& x) { return data->value(x); };
    inst.objective.gradient_oracle = [data](const Vec& x) { return data->grad(x); };
    inst.region = make_box_region(lower, upper);
    inst.known_L = *std::max_element(spectrum.begin(), spectrum.end());
    inst.known_mu = *std::min_element(spectrum.begin(), spectrum.end());
    inst.known_l = 0.0;

    const SimpleFeasibleRegion region = inst.region;
    if (seed == 0) {
        // Diagonal case: the box-constrained problem is separable, so both
        // the regularized subproblem and the global minimizer are
        // componentwise clamped solves.
        inst.subproblem_oracle = [data, lower, upper](double sigma, const Vec& xbar) {
            Vec u(xbar.size());
            for (std::size_t i = 0; i < u.size(); ++i) {
                u[i] = std::clamp((sigma * xbar[i] + data->b[i]) / (data->spectrum[i] + sigma),
                                  lower[i], upper[i]);
            }
            return u;
        };
        Vec xstar(b.size());
        bool ok = true;
        for (std::size_t i = 0; i < xstar.size(); ++i) {
            if (spectrum[i] > 0.0) {
                xstar[i] = std::clamp(b[i] / spectrum[i], lower[i], upper[i]);
            } else if (b[i] == 0.0) {
                xstar[i] = std::clamp(0.0, lower[i], upper[i]);
            } else {
                // Linear piece: minimum sits on the box face.
                xstar[i] = b[i] > 0.0 ? upper[i] : lower[i];
            }
            ok = ok && std::isfinite(xstar[i]);
        }
        if (ok) {
            inst.known_f_star = data->value(xstar);
            inst.known_optimum = std::move(xstar);
        }
    } else {
        // Rotated Q has no separable closed form; ground truth comes from a
        // projected-gradient reference run (honest high-precision oracle,
        // uncounted — this is test machinery, not a solver).
        auto reference_solve = [data, region](double sigma, const Vec& xbar) {
            const double L = *std::max_element(data->spectrum.begin(), data->spectrum.end());
            const double step_denom = L + sigma;
            Vec u = region.composite_prox_oracle(Vec(xbar.size(), 0.0), 0.0, xbar, 1.0, xbar);
            for (long long it = 0; it < 20000000; ++it) {
                Vec g = data->grad(u);
                if (sigma > 0.0) {
                    for (std::size_t i = 0; i < g.size(); ++i) g[i] += sigma * (u[i] - xbar[i]);
                }
                Vec next = region.composite_prox_oracle(g, 0.0, u, step_denom, u);
                double pg = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i) {
                    const double d = step_denom * (u[i] - next[i]);
                    pg += d * d;
                }
                u = std::move(next);
                if (std::sqrt(pg) <= 1e-13) return u;
            }
            throw Error(ErrorCode::singular_problem,
                        "reference projected-gradient run did not reach tolerance");
        };
        inst.subproblem_oracle = [reference_solve](double sigma, const Vec& xbar) {
            return reference_solve(sigma, xbar);
        };
        inst.known_optimum = reference_solve(0.0, Vec(b.size(), 0.0));
        inst.known_f_star = data->value(*inst.known_optimum);
    }
    inst.descriptor = {{"problem", "box_quadratic"}, {"n", std::to_string(n)},
                       {"spectrum", join_list(spectrum)}, {"shift", join_list(b)},
                       {"lower", join_list(lower)},       {"upper", join_list(upper)},
                       {"seed", std::to_string(seed)}};
    return inst;
}

ProblemInstance make_logistic_1d() {
    ProblemInstance inst;
    inst.name = "logistic_1d";
    inst.objective.dimension = 1;
    // f(x) = log(1+e^x) + log(1+e^-x) = |x| + 2 log1p(e^{-|x|}) (stable form)
    inst.objective.value_oracle = [](const Vec& x) {
        const double t = std::abs(x[0]);
        return t + 2.0 * std::log1p(std::exp(-t));
    };
    inst.objective.gradient_oracle = [](const Vec& x) { return Vec{std::tanh(0.5 * x[0])}; };
    inst.region = make_unconstrained_region();
    inst.known_L = 0.5;
    inst.known_mu = 0.0;
    inst.known_l = 0.0;
    inst.known_optimum = Vec{0.0};
    inst.known_f_star = 2.0 * std::log(2.0);
    // Stationarity tanh(u/2) + sigma (u - xbar) = 0 is monotone in u;
    // bisection on the bracket |u - xbar| <= 1/sigma nails it to rounding.
    inst.subproblem_oracle = [](double sigma, const Vec& xbar) {
        double lo = xbar[0] - 1.0 / sigma, hi = xbar[0] + 1.0 / sigma;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double g = std::tanh(0.5 * mid) + sigma * (mid - xbar[0]);
            (g > 0.0 ? hi : lo) = mid;
        }
        return Vec{0.5 * (lo + hi)};
    };
    inst.descriptor = {{"problem", "logistic_1d"}, {"n", "1"}};
    return inst;
}

ProblemInstance make_cos_quadratic(const Vec& spectrum, double c, std::uint64_t seed) {
    if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "cosine weight must be positive");
    validate_spectrum(spectrum, Vec(spectrum.size(), 0.0));
    const int n = static_cast<int>(spectrum.size());
    auto data = std::make_shared<QuadraticData>(
        QuadraticData{spectrum, Vec(spectrum.size(), 0.0), Rotation::make(n, seed)});

    ProblemInstance inst;
    inst.name = "cos_quadratic";
    inst.objective.dimension = n;
    inst.objective.value_oracle = [data, c](const Vec& x) {
        double s = 0.0;
        for (double xi : x) s += 1.0 - std::cos(xi);
        return data->value(x) + c * s;
    };
    inst.objective.gradient_oracle = [data, c](const Vec& x) {
        Vec g = data->apply_Q(x);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += c * std::sin(x[i]);
        return g;
    };
    inst.region = make_unconstrained_region();
    inst.known_L = *std::max_element(spectrum.begin(), spectrum.end()) + c;
    inst.known_mu = 0.0;
    inst.known_l = c;
    inst.known_optimum = Vec(spectrum.size(), 0.0);
    inst.known_f_star = 0.0;
    inst.descriptor = {{"problem", "cos_quadratic"},
                       {"n", std::to_string(n)},
                       {"spectrum", join_list(spectrum)},
                       {"c", fmt_double(c)},
                       {"seed", std::to_string(seed)}};
    return inst;
}

Vec seeded_start(const ProblemInstance& inst, std::uint64_t seed, double target_dist) {
    if (!inst.known_optimum) {
        throw Error(ErrorCode::invalid_argument, "seeded_start needs a ground-truth optimum");
    }
    Rng rng(seed ^ 0x517cc1b727220a95ull);
    const int n = inst.objective.dimension;
    Vec u = rng.unit_vector(n);
    Vec x0 = add_scaled(*inst.known_optimum, target_dist, u);
    if (!inst.region.membership_test(x0)) {
        // Project into X (prox of the indicator/composite part).
        x0 = inst.region.composite_prox_oracle(Vec(x0.size(), 0.0), 0.0, x0, 1.0, x0);
    }
    return x0;
}

std::string describe(const ProblemInstance& inst) {
    std::string out;
    for (const auto& [k, v] : inst.descriptor) out += k + " = " + v + "\n";
    return out;
}

}  // namespace gradnorm
