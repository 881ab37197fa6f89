#include "gradnorm/runner.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "gradnorm/ar_core.hpp"
#include "gradnorm/ar_pf.hpp"
#include "gradnorm/constants.hpp"
#include "gradnorm/error.hpp"
#include "gradnorm/nascar.hpp"
#include "gradnorm/oracle.hpp"
#include "gradnorm/prox.hpp"
#include "gradnorm/scar.hpp"

namespace gradnorm {

namespace {

double log2_ratio(double num, double den) { return std::log2(num / den); }

double log4_ceil_pos(double ratio) {
    if (!(ratio > 1.0)) return 0.0;
    return std::ceil(std::log(ratio) / std::log(4.0));
}

Vec broadcast(const Config& cfg, const std::string& key, int n) {
    std::vector<double> v = cfg.get_list(key);
    if (static_cast<int>(v.size()) == 1) return Vec(static_cast<std::size_t>(n), v[0]);
    if (static_cast<int>(v.size()) != n) {
        throw Error(ErrorCode::invalid_argument,
                    "config key '" + key + "': expected 1 or " + std::to_string(n) + " values");
    }
    return v;
}

Vec spectrum_from_config(const Config& cfg, int n) {
    std::vector<double> v = cfg.get_list("spectrum");
    if (static_cast<int>(v.size()) == n) return v;
    if (v.size() == 1) return Vec(static_cast<std::size_t>(n), v[0]);
    if (v.size() == 2 && n > 2) {
        Vec s(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            s[static_cast<std::size_t>(i)] = v[0] + (v[1] - v[0]) * i / (n - 1);
        }
        return s;
    }
    throw Error(ErrorCode::invalid_argument,
                "config key 'spectrum': expected 1, 2 (endpoints), or n values");
}

int dimension_from_config(const Config& cfg) {
    const long long n = cfg.get_int("n");
    if (n < 1 || n > 1'000'000) {
        throw Error(ErrorCode::invalid_argument, "config key 'n': out of range");
    }
    return static_cast<int>(n);
}

long long now_ns(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

// Comparison baseline: plain projected gradient descent with step 1/L,
// certified with the same measure as the staged solvers (projected-gradient
// norm at eta = 2L on constrained instances, plain gradient norm otherwise).
SolverReport gd_baseline(const SmoothObjective& obj, EvalCounter& counter,
                         const SimpleFeasibleRegion& region, const Vec& x0, double L,
                         double eps, long long max_evals, long long stride) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool plain = region.kind == "rn";
    SolverReport rep;
    Vec x = x0;
    for (long long k = 0;; ++k) {
        const Vec g = gradient(obj, counter, x);
        const double cert =
            plain ? nrm2(g) : projected_gradient(region, g, 2.0 * L, x).norm;
        const bool done = cert <= eps || counter.gradient_evals >= max_evals;
        if (done || k % stride == 0) {
            rep.stages.push_back({k, L, counter.gradient_evals, cert,
                                  diagnostic_value(obj, x), now_ns(t0)});
        }
        if (done) {
            rep.solution = x;
            rep.grad_norm_final = cert;
            rep.f_final = diagnostic_value(obj, x);
            rep.success = cert <= eps;
            rep.gradient_evals = counter.gradient_evals;
            rep.value_evals = counter.value_evals;
            rep.metrics["iterations"] = static_cast<double>(k);
            if (!rep.success) rep.status = "eval budget exhausted";
            return rep;
        }
        x = gradient_mapping(region, g, L, x);
    }
}

}  // namespace

ProblemInstance problem_from_config(const Config& cfg) {
    const std::string name = cfg.get_string("problem");
    const std::uint64_t seed = cfg.get_uint("seed", 0);
    if (name == "logistic_1d") return make_logistic_1d();
    const int n = dimension_from_config(cfg);
    const Vec spectrum = spectrum_from_config(cfg, n);
    if (name == "cos_quadratic") {
        return make_cos_quadratic(spectrum, cfg.get_double("c", 1.0), seed);
    }
    const Vec shift = cfg.has("shift") ? broadcast(cfg, "shift", n) : Vec(spectrum.size(), 0.0);
    if (name == "quadratic") return make_quadratic(spectrum, shift, seed);
    if (name == "box_quadratic") {
        return make_box_quadratic(spectrum, shift, broadcast(cfg, "lower", n),
                                  broadcast(cfg, "upper", n), seed);
    }
    throw Error(ErrorCode::unknown_name, "unknown problem: " + name);
}

Vec start_from_config(const ProblemInstance& inst, const Config& cfg) {
    if (cfg.has("x0")) {
        Vec x0 = broadcast(cfg, "x0", inst.objective.dimension);
        if (!inst.region.membership_test(x0)) {
            throw Error(ErrorCode::invalid_argument, "x0 lies outside the feasible region");
        }
        return x0;
    }
    return seeded_start(inst, cfg.get_uint("start_seed", 1), cfg.get_double("start_dist", 1.0));
}

RunOutcome run_experiment(const ProblemInstance& inst, const Vec& x0, const Config& cfg) {
    const std::string solver = cfg.get_string("solver");
    const double eps = cfg.get_double("epsilon", 1e-3);
    if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be positive");
    if (static_cast<int>(x0.size()) != inst.objective.dimension) {
        throw Error(ErrorCode::dimension_mismatch, "x0 has the wrong dimension");
    }

    RunOutcome out;
    out.solver = solver;
    out.problem_name = inst.name;
    out.epsilon = eps;

    // Ground truth (config overrides win so synthetic misreporting is
    // testable; instances constructed here always carry the real values).
    const auto known = [&](const char* key, double fallback, bool have) -> std::optional<double> {
        if (cfg.has(key)) return cfg.get_double(key);
        if (have) return fallback;
        return std::nullopt;
    };
    const std::optional<double> L = known("L", inst.known_L, inst.known_L > 0.0);
    const std::optional<double> mu = known("mu", inst.known_mu, inst.known_mu > 0.0);
    const std::optional<double> lc = known("l", inst.known_l, inst.known_l > 0.0);
    std::optional<double> dist_x0;
    if (inst.known_optimum) dist_x0 = dist(x0, *inst.known_optimum);
    const std::optional<double> D =
        cfg.has("D") ? std::optional<double>(cfg.get_double("D")) : dist_x0;

    if (L) out.ground_truth["L"] = *L;
    if (mu) out.ground_truth["mu"] = *mu;
    if (lc) out.ground_truth["l"] = *lc;
    if (inst.known_f_star) out.ground_truth["f_star"] = *inst.known_f_star;
    if (dist_x0) out.ground_truth["dist_x0"] = *dist_x0;

    const bool unconstrained = inst.region.kind == "rn";
    const auto require_unconstrained = [&] {
        if (!unconstrained) {
            throw Error(ErrorCode::invalid_argument,
                        "solver '" + solver + "' supports only unconstrained problems");
        }
    };
    const auto require = [&](const std::optional<double>& v, const char* what) -> double {
        if (!v) {
            throw Error(ErrorCode::invalid_argument,
                        "solver '" + solver + "' needs " + what +
                            " (set it in the config or use a problem with ground truth)");
        }
        return *v;
    };

    EvalCounter counter;
    CachedPoint cache;
    SolverReport& rep = out.report;
    auto& bounds = out.bounds;
    const auto add_bound = [&](const std::string& bname, double bound, double observed,
                               bool enforced) {
        bounds.push_back({bname, bound, observed, observed <= bound, enforced});
    };
    const auto certificate_row = [&](bool enforced) {
        add_bound("certificate_tolerance", eps, rep.grad_norm_final, enforced);
    };

    if (solver == "ar_fixed") {
        const double Lv = require(L, "L");
        const double Dv = require(D, "D (a distance upper bound)");
        const ARSchedule schedule = build_schedule(Lv, Dv, eps, !unconstrained);
        rep = run_fixed(inst.objective, counter, inst.region, schedule, x0);
        certificate_row(true);
        // Total-evaluation clause of the fixed-parameter analysis; printed
        // for comparison, not enforced (see the benchmark notes: the summed
        // per-stage budgets exceed this closed form by a constant factor).
        add_bound("staged_total_evals", 2.0 * (1.0 + 8.0 * std::sqrt(2.0 * kCA)) *
                                            std::sqrt(Lv * Dv / eps),
                  static_cast<double>(rep.gradient_evals), false);
    } else if (solver == "ar") {
        require_unconstrained();
        double sigma1 = 0.0;
        if (cfg.has("sigma1")) {
            sigma1 = cfg.get_double("sigma1");
        } else {
            sigma1 = eps / (5.0 * require(D, "sigma1 or D"));
        }
        const double M0 =
            cfg.has("M0") ? cfg.get_double("M0")
                          : estimate_initial_M(inst.objective, counter, cache, x0);
        ARResult r = ar(inst.objective, counter, cache, inst.region, x0, sigma1, M0, eps,
                        &rep.stages);
        rep.solution = std::move(r.solution);
        rep.grad_norm_final = nrm2(diagnostic_gradient(inst.objective, rep.solution));
        rep.f_final = diagnostic_value(inst.objective, rep.solution);
        rep.success = true;
        rep.gradient_evals = counter.gradient_evals;
        rep.value_evals = counter.value_evals;
        rep.metrics["M"] = r.M;
        rep.metrics["M0_used"] = M0;
        rep.metrics["sigma1"] = sigma1;
        rep.metrics["stages_run"] = static_cast<double>(r.stages_run);
        rep.metrics["linesearch_extra_evals"] = static_cast<double>(r.linesearch_extra_evals);
        if (!rep.stages.empty()) rep.metrics["grad_norm_x0"] = rep.stages.front().grad_norm;
        if (dist_x0) {
            add_bound("adaptive_certificate", 5.0 * sigma1 * *dist_x0, rep.grad_norm_final,
                      true);
        }
        add_bound("adaptive_eval_budget",
                  4.0 + log2_ratio(r.M, M0) + kC1 * std::sqrt(r.M / sigma1),
                  static_cast<double>(rep.gradient_evals), true);
    } else if (solver == "guess_and_check") {
        require_unconstrained();
        const double D0 = cfg.get_double("D0", 1.0);
        GuessCheckResult r =
            guess_and_check(inst.objective, counter, cache, x0, D0, eps, &rep.stages);
        rep.solution = std::move(r.solution);
        rep.grad_norm_final = nrm2(diagnostic_gradient(inst.objective, rep.solution));
        rep.f_final = diagnostic_value(inst.objective, rep.solution);
        rep.success = rep.grad_norm_final <= eps;
        rep.gradient_evals = counter.gradient_evals;
        rep.value_evals = counter.value_evals;
        rep.metrics["rounds"] = static_cast<double>(r.rounds);
        rep.metrics["D_final"] = r.D_final;
        rep.metrics["M0_used"] = r.M0;
        rep.metrics["M"] = r.M;
        certificate_row(true);
        if (L && dist_x0) {
            const double T = std::max(
                1.0, *dist_x0 > 0.0 ? std::ceil(std::log(*dist_x0 / D0) / std::log(4.0)) : 1.0);
            const double big = std::max(D0, 4.0 * *dist_x0);
            add_bound("distance_search_eval_budget",
                      2.0 + (5.0 + log2_ratio(*L, r.M0)) * T +
                          2.0 * kC1 * std::sqrt(10.0 * *L * big / eps),
                      static_cast<double>(rep.gradient_evals), true);
        }
    } else if (solver == "scar") {
        require_unconstrained();
        std::optional<double> mu0, M0;
        if (cfg.has("mu0")) mu0 = cfg.get_double("mu0");
        if (cfg.has("M0")) M0 = cfg.get_double("M0");
        ScarOptions options;
        options.literal_false_output = cfg.get_bool("literal_false_output", false);
        ScarResult r = scar(inst.objective, counter, cache, eps, x0, mu0, M0, options,
                            &rep.stages);
        rep.solution = std::move(r.solution);
        rep.grad_norm_final = nrm2(diagnostic_gradient(inst.objective, rep.solution));
        rep.f_final = diagnostic_value(inst.objective, rep.solution);
        rep.success = r.flag;
        rep.flag = r.flag ? "TRUE" : "FALSE";
        rep.gradient_evals = counter.gradient_evals;
        rep.value_evals = counter.value_evals;
        rep.metrics["M"] = r.M;
        rep.metrics["mu_final"] = r.mu_final;
        rep.metrics["restarts"] = static_cast<double>(r.restarts);
        rep.metrics["M0_used"] = r.M0_used;
        rep.metrics["mu0_used"] = r.mu0_used;
        rep.metrics["grad_norm_x0"] = r.grad_norm_start;
        certificate_row(r.flag);
        const double gn0 = std::max(r.grad_norm_start, eps);
        if (!mu0 && L && mu && r.M0_used > 0.0) {
            add_bound("restart_eval_budget_parameter_free",
                      2.0 + 2.0 * kC1 + log2_ratio(*L, r.M0_used) +
                          8.0 * kC1 * log4_ceil_pos(r.mu0_used / *mu) *
                              std::sqrt(5.0 * *L / *mu) +
                          8.0 * kC1 * std::sqrt(5.0 * *L / *mu) * log2_ratio(gn0, eps),
                      static_cast<double>(rep.gradient_evals), true);
        }
        if (mu0 && r.M0_used > 0.0) {
            add_bound("restart_eval_budget_certifying",
                      6.0 + log2_ratio(r.M, r.M0_used) +
                          (4.0 + 2.0 * kC1 * std::sqrt(10.0 * r.M / *mu0)) *
                              log2_ratio(gn0, eps),
                      static_cast<double>(rep.gradient_evals), true);
        }
        if (L && r.M0_used > 0.0) {
            add_bound("smoothness_estimate_cap", 2.0 * *L, r.M,
                      /*enforced=*/r.M0_used <= *L * (1.0 + 1e-9));
        }
    } else if (solver == "run_fixed_nc") {
        require_unconstrained();
        const double lv = require(lc, "l (a lower curvature bound)");
        const double Lv = require(L, "L");
        rep = run_fixed_nc(inst.objective, counter, x0, lv, Lv, eps);
        certificate_row(true);
        const double gn0 = std::max(rep.metrics["grad_norm_x0"], eps);
        if (inst.known_f_star) {
            const double gap0 = rep.metrics["f_x0"] - *inst.known_f_star;
            add_bound("proximal_eval_budget",
                      6.0 +
                          60.0 * (3.0 + std::sqrt(30.0) * kC1) * std::sqrt(Lv * lv) * gap0 /
                              (eps * eps) +
                          6.0 * (2.0 + std::sqrt(30.0) * kC1) * std::sqrt(Lv / lv) *
                              log2_ratio(gn0, eps),
                      static_cast<double>(rep.gradient_evals), true);
            add_bound("proximal_outer_iterations",
                      std::ceil(10.0 * lv * gap0 / (eps * eps)),
                      rep.metrics["outer_iterations"], true);
        }
        // Worst accepted-step ratio ||grad f(x_i)||^2 / (10 l (f_{i-1} - f_i))
        // over the steps the descent lemma covers (those with norm > eps).
        double worst = 0.0;
        for (std::size_t k = 1; k < rep.stages.size(); ++k) {
            if (rep.stages[k].grad_norm <= eps) continue;
            const double drop = rep.stages[k - 1].f_value - rep.stages[k].f_value;
            const double gn2 = rep.stages[k].grad_norm * rep.stages[k].grad_norm;
            worst = std::max(worst, drop > 0.0 ? gn2 / (10.0 * lv * drop) : 1e300);
        }
        add_bound("proximal_descent_check", 1.0, worst, true);
    } else if (solver == "nascar") {
        require_unconstrained();
        rep = nascar(inst.objective, counter, x0, eps);
        certificate_row(true);
        const double gn0 = std::max(rep.metrics["grad_norm_x0"], eps);
        const double M0 = rep.metrics.count("M0_probe") ? rep.metrics["M0_probe"] : 0.0;
        if (L && lc && inst.known_f_star && M0 > 0.0) {
            const double gap0 = rep.metrics["f_x0"] - *inst.known_f_star;
            add_bound("curvature_search_eval_budget",
                      6.0 + 12.0 * std::abs(rep.metrics["j1"]) +
                          log2_ratio(6.0 * *L, M0) +
                          2.0 * (kC1 + 2.0) * std::sqrt(60.0 * *L / M0) *
                              log2_ratio(gn0, eps) +
                          320.0 * (kC1 + 2.0) * std::sqrt(5.0 * *L * *lc) * gap0 /
                              (eps * eps),
                      static_cast<double>(rep.gradient_evals), true);
        }
        if (lc && rep.metrics.count("l_final")) {
            add_bound("accepted_curvature_cap", 4.0 * *lc, rep.metrics["l_final"], true);
        }
    } else if (solver == "gd_baseline") {
        const double Lv = require(L, "L");
        rep = gd_baseline(inst.objective, counter, inst.region, x0, Lv, eps,
                          cfg.get_int("max_evals", 500'000),
                          std::max<long long>(1, cfg.get_int("trace_stride", 100)));
        certificate_row(true);
    } else {
        throw Error(ErrorCode::unknown_name, "unknown solver: " + solver);
    }

    rep.metrics["epsilon"] = eps;
    return out;
}

}  // namespace gradnorm
