#include "gradnorm.h"

#include <cstring>
#include <exception>
#include <iterator>
#include <string>
#include <utility>

#include "gradnorm/config.hpp"
#include "gradnorm/constants.hpp"
#include "gradnorm/error.hpp"
#include "gradnorm/oracle.hpp"
#include "gradnorm/report.hpp"
#include "gradnorm/runner.hpp"
#include "gradnorm/vec.hpp"

struct gn_problem {
    gradnorm::ProblemInstance inst;
    std::string describe_cache;
};

struct gn_report {
    gradnorm::RunOutcome outcome;
    std::string csv_cache;
};

namespace {

thread_local std::string g_last_error;

gn_status status_of(gradnorm::ErrorCode code) {
    using gradnorm::ErrorCode;
    switch (code) {
        case ErrorCode::invalid_argument: return GN_ERR_INVALID_ARGUMENT;
        case ErrorCode::dimension_mismatch: return GN_ERR_DIMENSION_MISMATCH;
        case ErrorCode::oracle_not_finite: return GN_ERR_ORACLE_NOT_FINITE;
        case ErrorCode::objective_not_smooth: return GN_ERR_OBJECTIVE_NOT_SMOOTH;
        case ErrorCode::gradient_locally_constant: return GN_ERR_GRADIENT_LOCALLY_CONSTANT;
        case ErrorCode::schedule_not_increasing: return GN_ERR_SCHEDULE_NOT_INCREASING;
        case ErrorCode::distance_guess_diverged: return GN_ERR_DISTANCE_GUESS_DIVERGED;
        case ErrorCode::curvature_model_violated: return GN_ERR_CURVATURE_MODEL_VIOLATED;
        case ErrorCode::curvature_search_diverged: return GN_ERR_CURVATURE_SEARCH_DIVERGED;
        case ErrorCode::restart_limit: return GN_ERR_RESTART_LIMIT;
        case ErrorCode::singular_problem: return GN_ERR_SINGULAR_PROBLEM;
        case ErrorCode::unknown_name: return GN_ERR_UNKNOWN_NAME;
        case ErrorCode::io_error: return GN_ERR_IO;
    }
    return GN_ERR_INTERNAL;
}

// Every entry point funnels its body through here so no exception can cross
// the C boundary.
template <typename Fn>
gn_status guarded(Fn&& body) {
    try {
        body();
        return GN_OK;
    } catch (const gradnorm::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GN_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return GN_ERR_INTERNAL;
    }
}

gn_status require_args(bool ok, const char* message) {
    if (ok) return GN_OK;
    g_last_error = message;
    return GN_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* gn_version(void) { return "1.0.0"; }

const char* gn_last_error(void) { return g_last_error.c_str(); }

double gn_constant(const char* name) {
    if (!name) return 0.0;
    if (std::strcmp(name, "c_A") == 0) return gradnorm::kCA;
    if (std::strcmp(name, "C1") == 0) return gradnorm::kC1;
    return 0.0;
}

gn_status gn_config_get(const char* text, const char* key, char* buf, size_t buflen) {
    if (require_args(text && key && buf && buflen > 0, "gn_config_get: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const gradnorm::Config cfg = gradnorm::Config::parse_text(text);
        const std::string value = cfg.get_string(key);
        if (value.size() + 1 > buflen) {
            throw gradnorm::Error(gradnorm::ErrorCode::invalid_argument,
                                  "gn_config_get: buffer too small");
        }
        std::memcpy(buf, value.c_str(), value.size() + 1);
    });
}

gn_status gn_problem_from_config(const char* config_text, gn_problem** out) {
    if (require_args(config_text && out, "gn_problem_from_config: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        const gradnorm::Config cfg = gradnorm::Config::parse_text(config_text);
        auto* p = new gn_problem{gradnorm::problem_from_config(cfg), {}};
        *out = p;
    });
}

gn_status gn_problem_custom(int dimension, gn_value_fn value, gn_gradient_fn gradient,
                            void* user, gn_problem** out) {
    if (require_args(out && value && gradient && dimension > 0,
                     "gn_problem_custom: need out, callbacks, dimension > 0") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        gradnorm::ProblemInstance inst;
        inst.name = "custom";
        inst.descriptor["problem"] = "custom";
        inst.descriptor["n"] = std::to_string(dimension);
        inst.objective.dimension = dimension;
        inst.objective.value_oracle = [value, dimension, user](const gradnorm::Vec& x) {
            return value(x.data(), dimension, user);
        };
        inst.objective.gradient_oracle = [gradient, dimension, user](const gradnorm::Vec& x) {
            gradnorm::Vec g(static_cast<std::size_t>(dimension));
            gradient(x.data(), dimension, g.data(), user);
            return g;
        };
        inst.region = gradnorm::make_unconstrained_region();
        *out = new gn_problem{std::move(inst), {}};
    });
}

void gn_problem_free(gn_problem* p) { delete p; }

int gn_problem_dimension(const gn_problem* p) {
    return p ? p->inst.objective.dimension : 0;
}

const char* gn_problem_describe(const gn_problem* p) {
    if (!p) return "";
    auto* mutable_p = const_cast<gn_problem*>(p);
    if (mutable_p->describe_cache.empty()) {
        mutable_p->describe_cache = gradnorm::describe(p->inst);
    }
    return mutable_p->describe_cache.c_str();
}

gn_status gn_problem_known(const gn_problem* p, const char* key, double* out) {
    if (require_args(p && key && out, "gn_problem_known: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const std::string k = key;
        const auto missing = [&]() -> double {
            throw gradnorm::Error(gradnorm::ErrorCode::unknown_name,
                                  "no ground truth '" + k + "' on this instance");
        };
        if (k == "L") {
            *out = p->inst.known_L > 0.0 ? p->inst.known_L : missing();
        } else if (k == "mu") {
            *out = p->inst.known_mu > 0.0 ? p->inst.known_mu : missing();
        } else if (k == "l") {
            *out = p->inst.known_l > 0.0 ? p->inst.known_l : missing();
        } else if (k == "f_star") {
            *out = p->inst.known_f_star ? *p->inst.known_f_star : missing();
        } else {
            throw gradnorm::Error(gradnorm::ErrorCode::unknown_name,
                                  "unknown ground-truth key '" + k + "'");
        }
    });
}

gn_status gn_problem_start(const gn_problem* p, const char* config_text, double* x0_out) {
    if (require_args(p && config_text && x0_out, "gn_problem_start: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const gradnorm::Config cfg = gradnorm::Config::parse_text(config_text);
        const gradnorm::Vec x0 = gradnorm::start_from_config(p->inst, cfg);
        std::memcpy(x0_out, x0.data(), x0.size() * sizeof(double));
    });
}

gn_status gn_problem_distance(const gn_problem* p, const double* x, int n, double* out) {
    if (require_args(p && x && out, "gn_problem_distance: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        if (n != p->inst.objective.dimension) {
            throw gradnorm::Error(gradnorm::ErrorCode::dimension_mismatch,
                                  "gn_problem_distance: wrong dimension");
        }
        if (!p->inst.known_optimum) {
            throw gradnorm::Error(gradnorm::ErrorCode::unknown_name,
                                  "no known optimum on this instance");
        }
        *out = gradnorm::dist(gradnorm::Vec(x, x + n), *p->inst.known_optimum);
    });
}

gn_status gn_run(const gn_problem* p, const double* x0, int n, const char* config_text,
                 gn_report** out) {
    if (require_args(p && x0 && config_text && out, "gn_run: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        if (n != p->inst.objective.dimension) {
            throw gradnorm::Error(gradnorm::ErrorCode::dimension_mismatch,
                                  "gn_run: wrong x0 dimension");
        }
        const gradnorm::Config cfg = gradnorm::Config::parse_text(config_text);
        gradnorm::RunOutcome outcome =
            gradnorm::run_experiment(p->inst, gradnorm::Vec(x0, x0 + n), cfg);
        *out = new gn_report{std::move(outcome), {}};
    });
}

void gn_report_free(gn_report* r) { delete r; }

int gn_report_success(const gn_report* r) { return r && r->outcome.report.success ? 1 : 0; }

const char* gn_report_flag(const gn_report* r) { return r ? r->outcome.report.flag.c_str() : ""; }

const char* gn_report_status(const gn_report* r) {
    return r ? r->outcome.report.status.c_str() : "";
}

const char* gn_report_solver(const gn_report* r) { return r ? r->outcome.solver.c_str() : ""; }

double gn_report_grad_norm(const gn_report* r) {
    return r ? r->outcome.report.grad_norm_final : 0.0;
}

double gn_report_f_final(const gn_report* r) { return r ? r->outcome.report.f_final : 0.0; }

long long gn_report_gradient_evals(const gn_report* r) {
    return r ? r->outcome.report.gradient_evals : 0;
}

long long gn_report_value_evals(const gn_report* r) {
    return r ? r->outcome.report.value_evals : 0;
}

int gn_report_dimension(const gn_report* r) {
    return r ? static_cast<int>(r->outcome.report.solution.size()) : 0;
}

gn_status gn_report_solution(const gn_report* r, double* out, int n) {
    if (require_args(r && out, "gn_report_solution: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    if (n != static_cast<int>(r->outcome.report.solution.size())) {
        g_last_error = "gn_report_solution: wrong dimension";
        return GN_ERR_DIMENSION_MISMATCH;
    }
    std::memcpy(out, r->outcome.report.solution.data(), sizeof(double) * r->outcome.report.solution.size());
    return GN_OK;
}

double gn_report_metric(const gn_report* r, const char* key, double fallback) {
    if (!r || !key) return fallback;
    const auto it = r->outcome.report.metrics.find(key);
    return it == r->outcome.report.metrics.end() ? fallback : it->second;
}

long long gn_report_metric_count(const gn_report* r) {
    return r ? static_cast<long long>(r->outcome.report.metrics.size()) : 0;
}

gn_status gn_report_metric_at(const gn_report* r, long long i, const char** key_out,
                              double* value_out) {
    if (require_args(r && key_out && value_out, "gn_report_metric_at: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    if (i < 0 || i >= gn_report_metric_count(r)) {
        g_last_error = "gn_report_metric_at: index out of range";
        return GN_ERR_INVALID_ARGUMENT;
    }
    auto it = r->outcome.report.metrics.begin();
    std::advance(it, i);
    *key_out = it->first.c_str();
    *value_out = it->second;
    return GN_OK;
}

long long gn_report_known_count(const gn_report* r) {
    return r ? static_cast<long long>(r->outcome.ground_truth.size()) : 0;
}

gn_status gn_report_known_at(const gn_report* r, long long i, const char** key_out,
                             double* value_out) {
    if (require_args(r && key_out && value_out, "gn_report_known_at: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    if (i < 0 || i >= gn_report_known_count(r)) {
        g_last_error = "gn_report_known_at: index out of range";
        return GN_ERR_INVALID_ARGUMENT;
    }
    auto it = r->outcome.ground_truth.begin();
    std::advance(it, i);
    *key_out = it->first.c_str();
    *value_out = it->second;
    return GN_OK;
}

long long gn_report_stage_count(const gn_report* r) {
    return r ? static_cast<long long>(r->outcome.report.stages.size()) : 0;
}

gn_status gn_report_stage(const gn_report* r, long long i, long long* index_out,
                          double* sigma_or_l_out, long long* grad_evals_cum_out,
                          double* grad_norm_out, double* f_value_out, long long* wall_ns_out) {
    if (require_args(r != nullptr, "gn_report_stage: null report") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    if (i < 0 || i >= gn_report_stage_count(r)) {
        g_last_error = "gn_report_stage: index out of range";
        return GN_ERR_INVALID_ARGUMENT;
    }
    const gradnorm::StageRow& row = r->outcome.report.stages[static_cast<std::size_t>(i)];
    if (index_out) *index_out = row.index;
    if (sigma_or_l_out) *sigma_or_l_out = row.sigma_or_l;
    if (grad_evals_cum_out) *grad_evals_cum_out = row.grad_evals_cum;
    if (grad_norm_out) *grad_norm_out = row.grad_norm;
    if (f_value_out) *f_value_out = row.f_value;
    if (wall_ns_out) *wall_ns_out = row.wall_ns;
    return GN_OK;
}

long long gn_report_bound_count(const gn_report* r) {
    return r ? static_cast<long long>(r->outcome.bounds.size()) : 0;
}

gn_status gn_report_bound(const gn_report* r, long long i, const char** name_out,
                          double* bound_out, double* observed_out, int* pass_out,
                          int* enforced_out) {
    if (require_args(r != nullptr, "gn_report_bound: null report") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    if (i < 0 || i >= gn_report_bound_count(r)) {
        g_last_error = "gn_report_bound: index out of range";
        return GN_ERR_INVALID_ARGUMENT;
    }
    const gradnorm::BoundCheck& b = r->outcome.bounds[static_cast<std::size_t>(i)];
    if (name_out) *name_out = b.name.c_str();
    if (bound_out) *bound_out = b.bound;
    if (observed_out) *observed_out = b.observed;
    if (pass_out) *pass_out = b.pass ? 1 : 0;
    if (enforced_out) *enforced_out = b.enforced ? 1 : 0;
    return GN_OK;
}

gn_status gn_report_trace_csv(const gn_report* r, const char* run_id, int include_wall,
                              const char** out_text) {
    if (require_args(r && run_id && out_text, "gn_report_trace_csv: null argument") != GN_OK)
        return GN_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        auto* mutable_r = const_cast<gn_report*>(r);
        mutable_r->csv_cache = gradnorm::trace_csv(run_id, r->outcome.solver,
                                                   r->outcome.report.stages, include_wall != 0);
        *out_text = mutable_r->csv_cache.c_str();
    });
}

} /* extern "C" */
