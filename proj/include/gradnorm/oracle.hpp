#pragma once

#include <functional>
#include <optional>

#include "gradnorm/error.hpp"
#include "gradnorm/vec.hpp"

namespace gradnorm {

// Black-box smooth objective. The gradient-evaluation count of the attached
// EvalCounter is the complexity measure every bound in this library is
// stated in, so all oracle access must go through the counted entry points
// below (or through cached_gradient, which avoids double-charging points
// whose gradient is already in hand).
struct SmoothObjective {
    std::function<double(const Vec&)> value_oracle;
    std::function<Vec(const Vec&)> gradient_oracle;
    int dimension = 0;
};

struct EvalCounter {
    long long gradient_evals = 0;
    long long value_evals = 0;
};

struct CachedPoint {
    Vec point;
    std::optional<double> value;
    std::optional<Vec> gradient;
};

double evaluate(const SmoothObjective& obj, EvalCounter& counter, const Vec& x);
Vec gradient(const SmoothObjective& obj, EvalCounter& counter, const Vec& x);

// Cache hit (same point, gradient present) returns without touching the
// counter; otherwise delegates to gradient() and refreshes the cache.
Vec cached_gradient(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
                    const Vec& x);

// Value variant of the cache, used when a solver re-reads f at a point it
// has already paid for.
double cached_value(const SmoothObjective& obj, EvalCounter& counter, CachedPoint& cache,
                    const Vec& x);

// Uncounted oracle access for trace/diagnostic output only. Never use these
// inside a solver: they bypass the complexity ledger.
double diagnostic_value(const SmoothObjective& obj, const Vec& x);
Vec diagnostic_gradient(const SmoothObjective& obj, const Vec& x);

}  // namespace gradnorm
