#include "gradnorm/scar.hpp"

#include <chrono>
#include <cmath>

#include "gradnorm/ar_pf.hpp"
#include "gradnorm/error.hpp"
#include "gradnorm/prox.hpp"

namespace gradnorm {

namespace {

constexpr long long kRestartCap = 1'000'000;

long long now_ns(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

double value_or_diag(const SmoothObjective& obj, const CachedPoint& cache, const Vec& x) {
    if (cache.point == x && cache.value) return *cache.value;
    return diagnostic_value(obj, x);
}

}  // namespace

ScarResult scar(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
                double eps, const Vec& y0, std::optional<double> mu0,
                std::optional<double> M0, const ScarOptions& options,
                std::vector<StageRow>* trace) {
    if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "scar needs eps > 0");
    if ((mu0 && !(*mu0 > 0.0)) || (M0 && !(*M0 > 0.0))) {
        throw Error(ErrorCode::invalid_argument, "scar needs positive mu0/M0 when supplied");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const long long evals0 = counter.gradient_evals;
    const bool certifying = mu0.has_value();

    ScarResult res;
    double gn_prev = nrm2(cached_gradient(obj, counter, cache, y0));
    res.grad_norm_start = gn_prev;
    if (trace) {
        trace->push_back({0, 0.0, counter.gradient_evals - evals0, gn_prev,
                          value_or_diag(obj, cache, y0), now_ns(t0)});
    }
    if (gn_prev <= eps) {
        res.solution = y0;
        res.flag = true;
        res.M = M0.value_or(0.0);
        res.mu_final = mu0.value_or(0.0);
        res.M0_used = res.M;
        res.mu0_used = res.mu_final;
        res.gradient_evals = counter.gradient_evals - evals0;
        return res;
    }

    // The probe value only matters for parameters that were not supplied, so
    // it is skipped entirely when both are given.
    double M = 0.0, mu = 0.0;
    if (mu0 && M0) {
        M = *M0;
        mu = *mu0;
    } else {
        const double probe = estimate_initial_M(obj, counter, cache, y0);
        M = M0.value_or(probe);
        mu = mu0.value_or(probe);
    }
    res.M0_used = M;
    res.mu0_used = mu;

    Vec y = y0;
    double best_gn = gn_prev;
    Vec best_point = y0;
    for (long long t = 1; t <= kRestartCap; ++t) {
        const double sigma1 = mu / 10.0;
        ARResult round = ar(obj, counter, cache, unconstrained_region(), y, sigma1, M, eps);
        M = round.M;
        const double gn_new = nrm2(cached_gradient(obj, counter, cache, round.solution));
        if (trace) {
            trace->push_back({t, sigma1, counter.gradient_evals - evals0, gn_new,
                              value_or_diag(obj, cache, round.solution), now_ns(t0)});
        }
        if (gn_new < best_gn) {
            best_gn = gn_new;
            best_point = round.solution;
        }
        if (gn_new > gn_prev / 2.0) {
            if (certifying) {
                res.solution = options.literal_false_output ? y0 : best_point;
                res.flag = false;
                res.M = M;
                res.mu_final = mu;
                res.restarts = t;
                res.gradient_evals = counter.gradient_evals - evals0;
                return res;
            }
            mu /= 4.0;  // keep y (and the halving reference gn_prev) as they were
        } else {
            y = round.solution;
            gn_prev = gn_new;
            if (gn_new <= eps) {
                res.solution = std::move(y);
                res.flag = true;
                res.M = M;
                res.mu_final = mu;
                res.restarts = t;
                res.gradient_evals = counter.gradient_evals - evals0;
                return res;
            }
        }
    }
    throw Error(ErrorCode::restart_limit, "no progress");
}

}  // namespace gradnorm
