#include <cmath>

#include "doctest.h"
#include "gradnorm/agd.hpp"
#include "gradnorm/config.hpp"
#include "gradnorm/error.hpp"
#include "gradnorm/problems.hpp"
#include "gradnorm/runner.hpp"

using namespace gradnorm;

namespace {

// Subproblem stationarity measure at x for F(u) = f(u) + (sigma/2)||u - xbar||^2
// over the instance's region: the plain gradient norm when X = R^n, the
// projected-gradient norm at eta = L + sigma otherwise.
double subproblem_residual(const ProblemInstance& inst, double sigma, const Vec& xbar,
                           const Vec& x) {
    Vec g = diagnostic_gradient(inst.objective, x);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += sigma * (x[i] - xbar[i]);
    if (inst.region.kind == "rn") return nrm2(g);
    return projected_gradient(inst.region, g, inst.known_L + sigma, x).norm;
}

Vec draw_point(Rng& rng, const ProblemInstance& inst, double radius) {
    Vec p(static_cast<std::size_t>(inst.objective.dimension));
    for (double& v : p) v = rng.uniform_in(-radius, radius);
    if (!inst.region.membership_test(p)) {
        p = inst.region.composite_prox_oracle(Vec(p.size(), 0.0), 0.0, p, 1.0, p);
    }
    return p;
}

}  // namespace

TEST_CASE("quadratic factory ground truth") {
    ProblemInstance iso = make_quadratic({1.0, 1.0}, {0.0, 0.0}, 0);
    CHECK(iso.known_L == 1.0);
    CHECK(iso.known_mu == 1.0);
    REQUIRE(iso.known_optimum.has_value());
    CHECK(*iso.known_optimum == Vec{0.0, 0.0});
    CHECK(*iso.known_f_star == 0.0);
    CHECK(diagnostic_value(iso.objective, {3.0, 4.0}) == doctest::Approx(12.5));

    ProblemInstance ill = make_quadratic({1e-3, 1.0}, {0.0, 0.0}, 0);
    CHECK(ill.known_L == 1.0);
    CHECK(ill.known_mu == 1e-3);
    CHECK(ill.known_L / ill.known_mu == doctest::Approx(1e3));

    // mu <= L and l <= L on every instance the factory produces.
    for (const ProblemInstance* p : {&iso, &ill}) {
        CHECK(p->known_mu <= p->known_L);
        CHECK(p->known_l <= p->known_L);
    }
}

TEST_CASE("quadratic subproblem oracle solves (Q + sigma I) x = sigma xbar + b") {
    ProblemInstance inst = make_quadratic({4.0, 4.0}, {0.0, 0.0}, 0);
    REQUIRE(inst.subproblem_oracle);
    Vec u = inst.subproblem_oracle(1.0, {1.0, 0.0});
    CHECK(u[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(u[1] == 0.0);
}

TEST_CASE("singular quadratic with shift outside the range has no finite minimizer") {
    try {
        make_quadratic({0.0, 1.0}, {1.0, 0.0}, 0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::singular_problem);
    }
    // Singular but consistent: minimum-norm solution exists.
    ProblemInstance flat = make_quadratic({0.0, 1.0}, {0.0, 2.0}, 0);
    REQUIRE(flat.known_optimum.has_value());
    CHECK(*flat.known_optimum == Vec{0.0, 2.0});
}

TEST_CASE("box quadratic with interior minimum matches the unconstrained factory") {
    const Vec spectrum = {1.0, 2.0};
    const Vec b = {0.5, -0.4};
    ProblemInstance free_inst = make_quadratic(spectrum, b, 0);
    ProblemInstance boxed = make_box_quadratic(spectrum, b, {-10.0, -10.0}, {10.0, 10.0}, 0);
    REQUIRE(boxed.known_optimum.has_value());
    CHECK(dist(*boxed.known_optimum, *free_inst.known_optimum) <= 1e-14);
    CHECK(*boxed.known_f_star == doctest::Approx(*free_inst.known_f_star).epsilon(1e-14));
    Vec u1 = free_inst.subproblem_oracle(0.7, {0.3, 0.1});
    Vec u2 = boxed.subproblem_oracle(0.7, {0.3, 0.1});
    CHECK(dist(u1, u2) <= 1e-14);
}

TEST_CASE("one-dimensional boundary instance") {
    // f(x) = 0.5(x-2)^2 = 0.5 x^2 - 2x + const on X = [0,1]: minimum at the
    // upper face, where the projected gradient vanishes.
    ProblemInstance inst = make_box_quadratic({1.0}, {2.0}, {0.0}, {1.0}, 0);
    REQUIRE(inst.known_optimum.has_value());
    CHECK(*inst.known_optimum == Vec{1.0});
    Vec g = diagnostic_gradient(inst.objective, {1.0});
    CHECK(projected_gradient(inst.region, g, 2.0 * inst.known_L, {1.0}).norm == 0.0);
}

TEST_CASE("diagonal box subproblem oracle is the componentwise clamped solve") {
    ProblemInstance inst =
        make_box_quadratic({1.0, 3.0}, {0.8, -2.0}, {-0.5, -0.5}, {0.5, 0.5}, 0);
    const double sigma = 0.6;
    const Vec xbar = {0.2, 0.4};
    Vec u = inst.subproblem_oracle(sigma, xbar);
    for (int i = 0; i < 2; ++i) {
        const double q = (i == 0) ? 1.0 : 3.0;
        const double b = (i == 0) ? 0.8 : -2.0;
        const double expect =
            std::clamp((sigma * xbar[static_cast<std::size_t>(i)] + b) / (q + sigma), -0.5, 0.5);
        CHECK(u[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("logistic instance ground truth") {
    ProblemInstance inst = make_logistic_1d();
    CHECK(inst.known_L == 0.5);
    CHECK(inst.known_mu == 0.0);
    CHECK(*inst.known_optimum == Vec{0.0});
    CHECK(*inst.known_f_star == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(diagnostic_value(inst.objective, {0.0}) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(diagnostic_gradient(inst.objective, {0.0}) == Vec{0.0});
    CHECK(diagnostic_gradient(inst.objective, {3.0})[0] ==
          doctest::Approx(std::tanh(1.5)).epsilon(1e-15));
}

TEST_CASE("cosine-quadratic instance ground truth") {
    // Pure cosine part (zero spectrum): x = pi is a stationary non-minimizer.
    ProblemInstance pure = make_cos_quadratic({0.0}, 1.0, 0);
    CHECK(pure.known_L == 1.0);
    CHECK(pure.known_l == 1.0);
    const double pi = std::acos(-1.0);
    CHECK(diagnostic_value(pure.objective, {pi}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(diagnostic_gradient(pure.objective, {pi})[0]) <= 1e-15);
    CHECK(diagnostic_value(pure.objective, {0.0}) == 0.0);
    CHECK(diagnostic_gradient(pure.objective, {0.0}) == Vec{0.0});

    ProblemInstance mixed = make_cos_quadratic({2.0, 5.0}, 0.7, 3);
    CHECK(mixed.known_L == doctest::Approx(5.7));
    CHECK(mixed.known_l == 0.7);
    CHECK(*mixed.known_f_star == 0.0);
    CHECK(*mixed.known_optimum == Vec{0.0, 0.0});
    CHECK_THROWS_AS(make_cos_quadratic({1.0}, 0.0, 0), Error);
}

TEST_CASE("finite differences confirm every gradient oracle") {
    std::vector<ProblemInstance> instances;
    instances.push_back(make_quadratic({0.3, 1.0, 2.5}, {0.1, -0.7, 0.2}, 17));
    instances.push_back(
        make_box_quadratic({0.5, 2.0}, {1.0, -1.0}, {-1.0, -1.0}, {1.0, 1.0}, 0));
    instances.push_back(make_logistic_1d());
    instances.push_back(make_cos_quadratic({1.0, 4.0, 9.0}, 1.3, 23));

    const double delta = 1e-6;
    Rng rng(404);
    for (const ProblemInstance& inst : instances) {
        const int n = inst.objective.dimension;
        for (int t = 0; t < 20; ++t) {
            Vec x(static_cast<std::size_t>(n));
            for (double& v : x) v = rng.uniform_in(-2.0, 2.0);
            const Vec g = diagnostic_gradient(inst.objective, x);
            for (int i = 0; i < n; ++i) {
                Vec hi = x, lo = x;
                hi[static_cast<std::size_t>(i)] += delta;
                lo[static_cast<std::size_t>(i)] -= delta;
                const double fd = (diagnostic_value(inst.objective, hi) -
                                   diagnostic_value(inst.objective, lo)) /
                                  (2.0 * delta);
                CHECK(std::abs(fd - g[static_cast<std::size_t>(i)]) <= 1e-5);
            }
        }
    }
}

TEST_CASE("recorded smoothness constants dominate random secants") {
    std::vector<ProblemInstance> instances;
    instances.push_back(make_quadratic({0.2, 0.9, 1.7, 4.0}, {0.3, 0.0, -0.5, 0.1}, 31));
    instances.push_back(
        make_box_quadratic({0.5, 2.0, 3.0}, {1.0, -1.0, 0.4}, Vec(3, -1.0), Vec(3, 1.0), 0));
    instances.push_back(make_logistic_1d());
    instances.push_back(make_cos_quadratic({1.0, 3.0, 9.0}, 1.3, 37));

    Rng rng(505);
    for (const ProblemInstance& inst : instances) {
        const int n = inst.objective.dimension;
        for (int t = 0; t < 10'000; ++t) {
            Vec a(static_cast<std::size_t>(n)), bb(static_cast<std::size_t>(n));
            for (double& v : a) v = rng.uniform_in(-3.0, 3.0);
            for (double& v : bb) v = rng.uniform_in(-3.0, 3.0);
            const double gap = dist(a, bb);
            if (gap < 1e-8) continue;
            const double secant = dist(diagnostic_gradient(inst.objective, a),
                                       diagnostic_gradient(inst.objective, bb)) /
                                  gap;
            REQUIRE(secant <= inst.known_L * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("recorded lower-curvature constant dominates random curvature secants") {
    // (f(y) - f(x) - <grad f(x), y - x>) / (||y - x||^2 / 2) >= -l.
    ProblemInstance inst = make_cos_quadratic({0.0, 2.0, 6.0}, 1.1, 41);
    Rng rng(606);
    for (int t = 0; t < 10'000; ++t) {
        Vec x(3), y(3);
        for (double& v : x) v = rng.uniform_in(-3.0, 3.0);
        for (double& v : y) v = rng.uniform_in(-3.0, 3.0);
        const Vec d = sub(y, x);
        const double dd = dot(d, d);
        if (dd < 1e-4) continue;
        const double remainder = diagnostic_value(inst.objective, y) -
                                 diagnostic_value(inst.objective, x) -
                                 dot(diagnostic_gradient(inst.objective, x), d);
        REQUIRE(remainder / (0.5 * dd) >= -inst.known_l * (1.0 + 1e-9));
    }
}

TEST_CASE("subproblem oracle outputs are stationary") {
    std::vector<ProblemInstance> instances;
    instances.push_back(make_quadratic({0.4, 1.0, 2.2}, {0.2, -0.3, 0.5}, 13));
    instances.push_back(
        make_box_quadratic({0.5, 2.0}, {1.5, -2.5}, {-0.6, -0.6}, {0.6, 0.6}, 0));
    instances.push_back(
        make_box_quadratic({0.5, 1.5, 2.0}, {1.0, 0.0, -1.0}, Vec(3, -0.5), Vec(3, 0.5), 19));
    instances.push_back(make_logistic_1d());

    Rng rng(707);
    for (const ProblemInstance& inst : instances) {
        REQUIRE(inst.subproblem_oracle);
        for (int t = 0; t < 20; ++t) {
            const double sigma = std::exp(rng.uniform_in(-3.0, 1.6));
            const Vec xbar = draw_point(rng, inst, 2.0);
            const Vec u = inst.subproblem_oracle(sigma, xbar);
            CHECK(inst.region.membership_test(u));
            CHECK(subproblem_residual(inst, sigma, xbar, u) <= 1e-10);
        }
    }
}

TEST_CASE("subproblem oracle agrees with the accelerated subroutine's limit") {
    // Chain self-terminating solves (each restart contracts the distance to
    // the regularized minimizer) until the subproblem residual is 1e-10; the
    // landing point must be within 1e-8 of the closed-form answer.
    std::vector<ProblemInstance> instances;
    instances.push_back(make_quadratic({0.4, 1.0, 2.2}, {0.2, -0.3, 0.5}, 13));
    instances.push_back(
        make_box_quadratic({0.5, 2.0}, {1.5, -2.5}, {-0.6, -0.6}, {0.6, 0.6}, 0));
    instances.push_back(
        make_box_quadratic({0.5, 1.5, 2.0}, {1.0, 0.0, -1.0}, Vec(3, -0.5), Vec(3, 0.5), 19));
    instances.push_back(make_logistic_1d());

    Rng rng(808);
    for (const ProblemInstance& inst : instances) {
        for (int t = 0; t < 20; ++t) {
            const double sigma = rng.uniform_in(0.05, 3.0);
            const Vec xbar = draw_point(rng, inst, 2.0);
            const Vec expect = inst.subproblem_oracle(sigma, xbar);

            EvalCounter counter;
            SubproblemSpec spec;
            spec.objective = &inst.objective;
            spec.counter = &counter;
            spec.region = &inst.region;
            spec.sigma = sigma;
            spec.prox_center = xbar;

            Vec x = draw_point(rng, inst, 2.0);
            double hint = inst.known_L + sigma;
            bool converged = false;
            for (int restart = 0; restart < 200 && !converged; ++restart) {
                SubroutineResult res = solve_self_terminating(spec, x, hint);
                x = res.solution;
                hint = res.lipschitz_estimate;
                converged = subproblem_residual(inst, sigma, xbar, x) <= 1e-10;
            }
            REQUIRE(converged);
            CHECK(dist(x, expect) <= 1e-8);
        }
    }
}

TEST_CASE("seeded starts are deterministic and land at the requested distance") {
    ProblemInstance inst = make_quadratic({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, 5);
    Vec a = seeded_start(inst, 9, 2.5);
    Vec b = seeded_start(inst, 9, 2.5);
    CHECK(a == b);
    CHECK(dist(a, *inst.known_optimum) == doctest::Approx(2.5).epsilon(1e-12));
    Vec c = seeded_start(inst, 10, 2.5);
    CHECK(a != c);

    // Constrained instances project the raw point into the region.
    ProblemInstance boxed =
        make_box_quadratic({1.0, 1.0}, {0.0, 0.0}, {-0.5, -0.5}, {0.5, 0.5}, 0);
    Vec s = seeded_start(boxed, 4, 10.0);
    CHECK(boxed.region.membership_test(s));
}

TEST_CASE("descriptors round-trip through the config format") {
    ProblemInstance orig = make_quadratic({0.3, 1.1, 2.2}, {0.5, -0.25, 0.0}, 77);
    const std::string text = describe(orig);
    ProblemInstance copy = problem_from_config(Config::parse_text(text));
    CHECK(copy.known_L == orig.known_L);
    CHECK(copy.known_mu == orig.known_mu);
    CHECK(dist(*copy.known_optimum, *orig.known_optimum) == 0.0);
    const Vec probe = {0.4, -1.9, 0.7};
    CHECK(diagnostic_gradient(copy.objective, probe) ==
          diagnostic_gradient(orig.objective, probe));

    ProblemInstance boxed = make_box_quadratic({1.0, 4.0}, {2.0, 0.5}, {-1.0, -1.0},
                                               {1.0, 1.0}, 0);
    ProblemInstance boxed_copy = problem_from_config(Config::parse_text(describe(boxed)));
    CHECK(boxed_copy.region.kind == "box");
    CHECK(dist(*boxed_copy.known_optimum, *boxed.known_optimum) == 0.0);

    ProblemInstance cosq = make_cos_quadratic({0.0, 9.0}, 1.0, 5);
    ProblemInstance cosq_copy = problem_from_config(Config::parse_text(describe(cosq)));
    CHECK(cosq_copy.known_L == cosq.known_L);
    CHECK(cosq_copy.known_l == cosq.known_l);
    CHECK(diagnostic_value(cosq_copy.objective, {1.0, -2.0}) ==
          diagnostic_value(cosq.objective, {1.0, -2.0}));

    ProblemInstance lg_copy = problem_from_config(Config::parse_text(describe(make_logistic_1d())));
    CHECK(lg_copy.known_L == 0.5);
}
