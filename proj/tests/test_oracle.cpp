#include <cmath>

#include "doctest.h"
#include "gradnorm/error.hpp"
#include "gradnorm/oracle.hpp"
#include "gradnorm/problems.hpp"

using namespace gradnorm;

namespace {

SmoothObjective half_norm_squared(int n) {
    SmoothObjective obj;
    obj.dimension = n;
    obj.value_oracle = [](const Vec& x) { return 0.5 * dot(x, x); };
    obj.gradient_oracle = [](const Vec& x) { return x; };
    return obj;
}

SmoothObjective zero_objective(int n) {
    SmoothObjective obj;
    obj.dimension = n;
    obj.value_oracle = [](const Vec&) { return 0.0; };
    obj.gradient_oracle = [](const Vec& x) { return Vec(x.size(), 0.0); };
    return obj;
}

}  // namespace

TEST_CASE("evaluate returns the oracle value and charges one value eval") {
    EvalCounter c;
    const SmoothObjective obj = half_norm_squared(2);
    CHECK(evaluate(obj, c, {3.0, 4.0}) == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(c.value_evals == 1);
    CHECK(c.gradient_evals == 0);

    const SmoothObjective zero = zero_objective(3);
    CHECK(evaluate(zero, c, {1.0, -2.0, 7.0}) == 0.0);
    CHECK(c.value_evals == 2);
}

TEST_CASE("evaluate matches the hand value of the 1-D logistic instance") {
    ProblemInstance inst = make_logistic_1d();
    EvalCounter c;
    CHECK(evaluate(inst.objective, c, {0.0}) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("gradient returns the oracle gradient and charges one gradient eval") {
    EvalCounter c;
    const SmoothObjective obj = half_norm_squared(2);
    Vec g = gradient(obj, c, {3.0, 4.0});
    CHECK(g == Vec{3.0, 4.0});
    CHECK(c.gradient_evals == 1);
    CHECK(c.value_evals == 0);

    const SmoothObjective zero = zero_objective(2);
    CHECK(gradient(zero, c, {5.0, 5.0}) == Vec{0.0, 0.0});

    SmoothObjective diag;
    diag.dimension = 2;
    diag.value_oracle = [](const Vec& x) { return 0.5 * (x[0] * x[0] + 4.0 * x[1] * x[1]); };
    diag.gradient_oracle = [](const Vec& x) { return Vec{x[0], 4.0 * x[1]}; };
    CHECK(gradient(diag, c, {1.0, 1.0}) == Vec{1.0, 4.0});
    CHECK(c.gradient_evals == 3);
}

TEST_CASE("counters are monotone across repeated calls") {
    EvalCounter c;
    const SmoothObjective obj = half_norm_squared(1);
    long long prev = 0;
    for (int k = 0; k < 10; ++k) {
        gradient(obj, c, {1.0});
        CHECK(c.gradient_evals == prev + 1);
        prev = c.gradient_evals;
    }
}

TEST_CASE("oracles are deterministic: same point, bitwise-identical output") {
    ProblemInstance inst = make_quadratic({0.3, 1.7, 0.9}, {0.1, -0.2, 0.4}, 11);
    EvalCounter c;
    const Vec x = {0.37, -1.21, 2.05};
    const Vec g1 = gradient(inst.objective, c, x);
    const Vec g2 = gradient(inst.objective, c, x);
    CHECK(g1 == g2);
    CHECK(evaluate(inst.objective, c, x) == evaluate(inst.objective, c, x));
}

TEST_CASE("dimension mismatch is a hard error") {
    EvalCounter c;
    const SmoothObjective obj = half_norm_squared(3);
    CHECK_THROWS_AS(evaluate(obj, c, {1.0}), Error);
    CHECK_THROWS_AS(gradient(obj, c, {1.0, 2.0}), Error);
    try {
        gradient(obj, c, {1.0});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::dimension_mismatch);
    }
}

TEST_CASE("non-finite oracle output aborts with a diagnostic") {
    SmoothObjective bad;
    bad.dimension = 1;
    bad.value_oracle = [](const Vec&) { return std::nan(""); };
    bad.gradient_oracle = [](const Vec&) { return Vec{HUGE_VAL}; };
    EvalCounter c;
    try {
        gradient(bad, c, {0.0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::oracle_not_finite);
        CHECK(std::string(e.what()).find("NaN/Inf") != std::string::npos);
    }
    CHECK_THROWS_AS(evaluate(bad, c, {0.0}), Error);
}

TEST_CASE("cached_gradient: hit leaves the counter untouched, miss charges and replaces") {
    EvalCounter c;
    CachedPoint cache;
    const SmoothObjective obj = half_norm_squared(2);

    // Cold start charges.
    Vec g = cached_gradient(obj, c, cache, {1.0, 2.0});
    CHECK(g == Vec{1.0, 2.0});
    CHECK(c.gradient_evals == 1);

    // Repeat at the same point: free.
    g = cached_gradient(obj, c, cache, {1.0, 2.0});
    CHECK(g == Vec{1.0, 2.0});
    CHECK(c.gradient_evals == 1);

    // New point: charged, cache replaced.
    g = cached_gradient(obj, c, cache, {5.0, -1.0});
    CHECK(g == Vec{5.0, -1.0});
    CHECK(c.gradient_evals == 2);
    CHECK(cache.point == Vec{5.0, -1.0});

    // The old point is gone from the cache.
    cached_gradient(obj, c, cache, {1.0, 2.0});
    CHECK(c.gradient_evals == 3);
}

TEST_CASE("cached gradient equals the oracle output at the cached point") {
    ProblemInstance inst = make_quadratic({2.0, 5.0}, {1.0, 0.0}, 7);
    EvalCounter c;
    CachedPoint cache;
    const Vec x = {0.4, -0.8};
    const Vec via_cache = cached_gradient(inst.objective, c, cache, x);
    EvalCounter c2;
    CHECK(via_cache == gradient(inst.objective, c2, x));
    REQUIRE(cache.gradient.has_value());
    CHECK(*cache.gradient == via_cache);
}

TEST_CASE("cached_value mirrors cached_gradient on the value side") {
    EvalCounter c;
    CachedPoint cache;
    const SmoothObjective obj = half_norm_squared(2);

    CHECK(cached_value(obj, c, cache, {3.0, 4.0}) == 12.5);
    CHECK(c.value_evals == 1);
    CHECK(cached_value(obj, c, cache, {3.0, 4.0}) == 12.5);
    CHECK(c.value_evals == 1);

    // Moving the cache to a new point drops the stale gradient slot.
    cached_gradient(obj, c, cache, {3.0, 4.0});
    CHECK(c.gradient_evals == 1);
    cached_value(obj, c, cache, {0.0, 1.0});
    CHECK(c.value_evals == 2);
    CHECK(!cache.gradient.has_value());
}

TEST_CASE("value and gradient caches can coexist at one point") {
    EvalCounter c;
    CachedPoint cache;
    const SmoothObjective obj = half_norm_squared(1);
    cached_value(obj, c, cache, {2.0});
    cached_gradient(obj, c, cache, {2.0});
    CHECK(cache.value.has_value());
    CHECK(cache.gradient.has_value());
    // Both reads are now free.
    cached_value(obj, c, cache, {2.0});
    cached_gradient(obj, c, cache, {2.0});
    CHECK(c.value_evals == 1);
    CHECK(c.gradient_evals == 1);
}

TEST_CASE("diagnostic oracle access bypasses the ledger") {
    ProblemInstance inst = make_quadratic({1.0, 3.0}, {0.0, 0.0}, 0);
    const Vec x = {1.0, 1.0};
    CHECK(diagnostic_value(inst.objective, x) == doctest::Approx(2.0));
    CHECK(diagnostic_gradient(inst.objective, x) == Vec{1.0, 3.0});
    // No counter exists to charge; the point of these entry points is that
    // trace/report code can read f without touching any run's ledger.
}
