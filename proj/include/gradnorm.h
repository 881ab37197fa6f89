/*
 * C interface to the gradient-norm minimization library.
 *
 * Usage pattern: build a gn_problem (from flat "key = value" config text or
 * from user callbacks), pick a start point, run a solver, read the report,
 * free both handles. Every function that can fail returns a gn_status;
 * gn_last_error() describes the most recent failure on the calling thread.
 *
 * All array arguments are plain double buffers of the problem dimension.
 * Returned const char* pointers stay valid until the owning handle is freed
 * (or, for gn_last_error, until the next failing call on the same thread).
 */
#ifndef GRADNORM_H
#define GRADNORM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gn_problem gn_problem;
typedef struct gn_report gn_report;

typedef enum gn_status {
    GN_OK = 0,
    GN_ERR_INVALID_ARGUMENT = 1,
    GN_ERR_DIMENSION_MISMATCH = 2,
    GN_ERR_ORACLE_NOT_FINITE = 3,
    GN_ERR_OBJECTIVE_NOT_SMOOTH = 4,
    GN_ERR_GRADIENT_LOCALLY_CONSTANT = 5,
    GN_ERR_SCHEDULE_NOT_INCREASING = 6,
    GN_ERR_DISTANCE_GUESS_DIVERGED = 7,
    GN_ERR_CURVATURE_MODEL_VIOLATED = 8,
    GN_ERR_CURVATURE_SEARCH_DIVERGED = 9,
    GN_ERR_RESTART_LIMIT = 10,
    GN_ERR_SINGULAR_PROBLEM = 11,
    GN_ERR_UNKNOWN_NAME = 12,
    GN_ERR_IO = 13,
    GN_ERR_INTERNAL = 14
} gn_status;

/* Objective callbacks for custom problems. The gradient callback writes
 * `n` doubles into `grad_out`. `user` is passed through untouched. */
typedef double (*gn_value_fn)(const double* x, int n, void* user);
typedef void (*gn_gradient_fn)(const double* x, int n, double* grad_out, void* user);

const char* gn_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
const char* gn_last_error(void);

/* Named constants the complexity bounds are stated with:
 * "c_A" (subroutine rate constant) and "C1" (= 3 + 16*sqrt(2*c_A)).
 * Returns 0.0 for unknown names. */
double gn_constant(const char* name);

/* ---- configuration text ---------------------------------------------- */

/* Look up `key` in flat config text; copies the value into buf (NUL
 * terminated). GN_ERR_UNKNOWN_NAME when the key is absent,
 * GN_ERR_INVALID_ARGUMENT when the buffer is too small or the text is
 * malformed. Later duplicate keys win, so overrides can be appended. */
gn_status gn_config_get(const char* text, const char* key, char* buf, size_t buflen);

/* ---- problems --------------------------------------------------------- */

/* Instantiate a benchmark problem from config text (problem = quadratic |
 * box_quadratic | logistic_1d | cos_quadratic plus its parameter keys). */
gn_status gn_problem_from_config(const char* config_text, gn_problem** out);

/* Wrap caller-supplied oracles as an unconstrained problem with no ground
 * truth. The callbacks must stay valid for the life of the handle. */
gn_status gn_problem_custom(int dimension, gn_value_fn value, gn_gradient_fn gradient,
                            void* user, gn_problem** out);

void gn_problem_free(gn_problem* p);

int gn_problem_dimension(const gn_problem* p);

/* Descriptor as config-format lines; owned by the handle. */
const char* gn_problem_describe(const gn_problem* p);

/* Ground truth lookup, key in {"L", "mu", "l", "f_star"}.
 * GN_ERR_UNKNOWN_NAME when the instance does not carry that value. */
gn_status gn_problem_known(const gn_problem* p, const char* key, double* out);

/* Start point from the config's x0 / start_seed / start_dist keys; writes
 * gn_problem_dimension(p) doubles. */
gn_status gn_problem_start(const gn_problem* p, const char* config_text, double* x0_out);

/* Euclidean distance from x to the instance's known optimum. */
gn_status gn_problem_distance(const gn_problem* p, const double* x, int n, double* out);

/* ---- solving ----------------------------------------------------------- */

/* Run the solver named in the config (solver = ..., epsilon = ..., plus
 * solver-specific keys) from x0. On success *out owns the full report,
 * including the stage trace and the complexity-bound rows. */
gn_status gn_run(const gn_problem* p, const double* x0, int n, const char* config_text,
                 gn_report** out);

void gn_report_free(gn_report* r);

int gn_report_success(const gn_report* r);
const char* gn_report_flag(const gn_report* r);   /* "TRUE", "FALSE", or "" */
const char* gn_report_status(const gn_report* r);
const char* gn_report_solver(const gn_report* r);
double gn_report_grad_norm(const gn_report* r);
double gn_report_f_final(const gn_report* r);
long long gn_report_gradient_evals(const gn_report* r);
long long gn_report_value_evals(const gn_report* r);
int gn_report_dimension(const gn_report* r);
gn_status gn_report_solution(const gn_report* r, double* out, int n);

/* Named scalar observables (observed M, restarts, ...); fallback when the
 * key was not recorded. */
double gn_report_metric(const gn_report* r, const char* key, double fallback);
long long gn_report_metric_count(const gn_report* r);
gn_status gn_report_metric_at(const gn_report* r, long long i, const char** key_out,
                              double* value_out);

/* Ground-truth values the bound rows were instantiated with. */
long long gn_report_known_count(const gn_report* r);
gn_status gn_report_known_at(const gn_report* r, long long i, const char** key_out,
                             double* value_out);

/* Stage trace rows. Output pointers may be NULL to skip a column. */
long long gn_report_stage_count(const gn_report* r);
gn_status gn_report_stage(const gn_report* r, long long i, long long* index_out,
                          double* sigma_or_l_out, long long* grad_evals_cum_out,
                          double* grad_norm_out, double* f_value_out, long long* wall_ns_out);

/* Complexity-bound rows: observed quantity vs. the bound it must not
 * exceed. enforced = 0 marks comparison-only rows. */
long long gn_report_bound_count(const gn_report* r);
gn_status gn_report_bound(const gn_report* r, long long i, const char** name_out,
                          double* bound_out, double* observed_out, int* pass_out,
                          int* enforced_out);

/* Trace rendered as CSV (header line included); owned by the handle and
 * rebuilt on each call. include_wall = 0 zeroes the wall_ns column so byte
 * comparisons across reruns are meaningful. */
gn_status gn_report_trace_csv(const gn_report* r, const char* run_id, int include_wall,
                              const char** out_text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRADNORM_H */
