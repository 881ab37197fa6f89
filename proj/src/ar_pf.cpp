#include "gradnorm/ar_pf.hpp"

#include <chrono>
#include <cmath>

#include "gradnorm/agd.hpp"
#include "gradnorm/ar_core.hpp"
#include "gradnorm/constants.hpp"
#include "gradnorm/error.hpp"

namespace gradnorm {

namespace {

long long now_ns(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

double cached_norm_or_diag(const SmoothObjective& obj, const CachedPoint& cache, const Vec& x) {
    if (cache.point == x && cache.gradient) return nrm2(*cache.gradient);
    return nrm2(diagnostic_gradient(obj, x));
}

double cached_value_or_diag(const SmoothObjective& obj, const CachedPoint& cache, const Vec& x) {
    if (cache.point == x && cache.value) return *cache.value;
    return diagnostic_value(obj, x);
}

}  // namespace

double local_line_search(const SmoothObjective& obj, EvalCounter& counter,
                         CachedPoint& cache, double sigma, const Vec& center,
                         const Vec& x, double M0, long long* extra_evals) {
    if (!(M0 > 0.0) || !(sigma > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "local_line_search needs M0, sigma > 0");
    }
    const Vec gf = cached_gradient(obj, counter, cache, x);
    Vec gg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) gg[i] = gf[i] + sigma * (x[i] - center[i]);
    const double dxc = dist(x, center);
    const double gx = cached_value(obj, counter, cache, x) + 0.5 * sigma * dxc * dxc;

    double M = M0;
    for (int j = 0; j <= 200; ++j) {
        const double step = 1.0 / (2.0 * (M + sigma));
        const Vec xpp = add_scaled(x, -step, gg);
        const double dc = dist(xpp, center);
        const double gxpp = evaluate(obj, counter, xpp) + 0.5 * sigma * dc * dc;
        const double inner = -step * dot(gg, gg);  // <grad g(x), xpp - x> exactly
        const double d = dist(xpp, x);
        const double rhs = 0.5 * (M + sigma) * d * d;
        const double slack = descent_test_allowance(M + sigma, x, xpp, gx, gxpp, inner, rhs);
        if (gxpp - gx - inner <= rhs + slack) return M;
        counter.gradient_evals += 1;  // failed trial, by the accounting convention
        if (extra_evals) *extra_evals += 1;
        M *= 2.0;
    }
    throw Error(ErrorCode::objective_not_smooth, "nonsmooth objective");
}

double estimate_initial_M(const SmoothObjective& obj, EvalCounter& counter,
                          CachedPoint& cache, const Vec& x0) {
    if (x0.empty()) {
        throw Error(ErrorCode::invalid_argument, "curvature probe needs dimension >= 1");
    }
    const int n = static_cast<int>(x0.size());
    const double delta = 1e-2 * std::max(1.0, nrm2(x0));
    const Vec g0 = cached_gradient(obj, counter, cache, x0);
    Rng rng(0x8a5cd789635d2dffull);
    for (int attempt = 0; attempt <= 8; ++attempt) {
        Vec u;
        if (attempt < n) {
            u.assign(static_cast<std::size_t>(n), 0.0);
            u[static_cast<std::size_t>(attempt)] = 1.0;
        } else {
            u = rng.unit_vector(n);
        }
        const Vec z = add_scaled(x0, delta, u);
        const Vec gz = gradient(obj, counter, z);
        const double est = dist(gz, g0) / delta;
        if (est > 0.0) return est;
    }
    throw Error(ErrorCode::gradient_locally_constant, "gradient locally constant");
}

ARResult ar(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
            const SimpleFeasibleRegion& region, const Vec& x0, double sigma1,
            double M0, double eps_for_precheck, std::vector<StageRow>* trace) {
    if (!(sigma1 > 0.0) || !(M0 > 0.0) || !(eps_for_precheck >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "ar needs sigma1, M0 > 0 and eps >= 0");
    }
    if (!region.membership_test(x0)) {
        throw Error(ErrorCode::invalid_argument, "start point outside the feasible region");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const long long evals0 = counter.gradient_evals;

    ARResult res;
    const double gn0 = nrm2(cached_gradient(obj, counter, cache, x0));
    if (trace) {
        trace->push_back({0, 0.0, counter.gradient_evals - evals0, gn0,
                          cached_value_or_diag(obj, cache, x0), now_ns(t0)});
    }
    if (gn0 <= eps_for_precheck) {
        res.solution = x0;
        res.M = M0;
        res.gradient_evals = counter.gradient_evals - evals0;
        return res;
    }

    Vec x = x0;
    Vec xbar = x0;
    double sigma = sigma1;
    double M = M0;
    double hint = M0;
    int s = 0;
    for (;;) {
        ++s;
        if (s > 1) {
            xbar = update_prox_center(xbar, x, sigma, 4.0 * sigma);
            sigma *= 4.0;
        }
        SubproblemSpec sp;
        sp.objective = &obj;
        sp.counter = &counter;
        sp.cache = &cache;
        sp.region = &region;
        sp.sigma = sigma;
        sp.prox_center = xbar;
        const SubroutineResult sub = solve_self_terminating(sp, x, hint);
        x = sub.solution;
        const double warm =
            std::max(M, std::isfinite(sub.lipschitz_estimate) ? sub.lipschitz_estimate / kCA : 0.0);
        M = local_line_search(obj, counter, cache, sigma, xbar, x, warm,
                              &res.linesearch_extra_evals);
        hint = M;
        if (trace) {
            trace->push_back({s, sigma, counter.gradient_evals - evals0,
                              cached_norm_or_diag(obj, cache, x),
                              cached_value_or_diag(obj, cache, x), now_ns(t0)});
        }
        if (sigma >= M) break;
    }
    res.solution = std::move(x);
    res.M = M;
    res.stages_run = s;
    res.gradient_evals = counter.gradient_evals - evals0;
    return res;
}

GuessCheckResult guess_and_check(const SmoothObjective& obj, EvalCounter& counter,
                                 CachedPoint& cache, const Vec& x0, double D0, double eps,
                                 std::vector<StageRow>* trace) {
    if (!(D0 > 0.0) || !(eps > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "guess_and_check needs D0, eps > 0");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const long long evals0 = counter.gradient_evals;
    const double M0 = estimate_initial_M(obj, counter, cache, x0);
    double D = D0;
    for (int t = 1; t <= 64; ++t) {
        D *= 4.0;
        const double sigma1 = eps / (5.0 * D);
        ARResult round = ar(obj, counter, cache, unconstrained_region(), x0, sigma1, M0, eps);
        const double gn = nrm2(cached_gradient(obj, counter, cache, round.solution));
        if (trace) {
            trace->push_back({t, sigma1, counter.gradient_evals - evals0, gn,
                              cached_value_or_diag(obj, cache, round.solution), now_ns(t0)});
        }
        if (gn <= eps) return {round.solution, t, D, M0, round.M};
    }
    throw Error(ErrorCode::distance_guess_diverged, "distance guess diverged");
}

}  // namespace gradnorm
