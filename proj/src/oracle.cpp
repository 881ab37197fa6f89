#include "gradnorm/oracle.hpp"

#include <cmath>
#include <string>

namespace gradnorm {

namespace {

void check_dimension(const SmoothObjective& obj, const Vec& x, const char* where) {
    if (static_cast<int>(x.size()) != obj.dimension) {
        throw Error(ErrorCode::dimension_mismatch,
                    std::string(where) + ": point has length " + std::to_string(x.size()) +
                        ", objective dimension is " + std::to_string(obj.dimension));
    }
}

}  // namespace

double evaluate(const SmoothObjective& obj, EvalCounter& counter, const Vec& x) {
    check_dimension(obj, x, "evaluate");
    counter.value_evals += 1;
    const double v = obj.value_oracle(x);
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::oracle_not_finite,
                    "oracle produced NaN/Inf: value oracle at a point with norm " +
                        std::to_string(nrm2(x)));
    }
    return v;
}

Vec gradient(const SmoothObjective& obj, EvalCounter& counter, const Vec& x) {
    check_dimension(obj, x, "gradient");
    counter.gradient_evals += 1;
    Vec g = obj.gradient_oracle(x);
    if (static_cast<int>(g.size()) != obj.dimension) {
        throw Error(ErrorCode::dimension_mismatch,
                    "gradient: oracle returned length " + std::to_string(g.size()));
    }
    if (!all_finite(g)) {
        throw Error(ErrorCode::oracle_not_finite,
                    "oracle produced NaN/Inf: gradient oracle at a point with norm " +
                        std::to_string(nrm2(x)));
    }
    return g;
}

Vec cached_gradient(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
                    const Vec& x) {
    if (cache.gradient.has_value() && cache.point == x) return *cache.gradient;
    Vec g = gradient(obj, counter, x);
    if (cache.point != x) {
        cache.point = x;
        cache.value.reset();
    }
    cache.gradient = g;
    return g;
}

double cached_value(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
                    const Vec& x) {
    if (cache.value.has_value() && cache.point == x) return *cache.value;
    const double v = evaluate(obj, counter, x);
    if (cache.point != x) {
        cache.point = x;
        cache.gradient.reset();
    }
    cache.value = v;
    return v;
}

double diagnostic_value(const SmoothObjective& obj, const Vec& x) { return obj.value_oracle(x); }

Vec diagnostic_gradient(const SmoothObjective& obj, const Vec& x) {
    return obj.gradient_oracle(x);
}

}  // namespace gradnorm
