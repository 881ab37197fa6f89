#pragma once

#include <map>
#include <string>
#include <vector>

#include "gradnorm/vec.hpp"

namespace gradnorm {

// One row of the per-stage (or per-outer-iteration) trace. grad_norm is the
// plain gradient norm for unconstrained runs and the projected-gradient norm
// for constrained ones; sigma_or_l carries the stage regularization weight
// or the outer curvature estimate depending on the solver.
struct StageRow {
    long long index = 0;
    double sigma_or_l = 0.0;
    long long grad_evals_cum = 0;
    double grad_norm = 0.0;
    double f_value = 0.0;
    long long wall_ns = 0;
};

struct SolverReport {
    Vec solution;
    double grad_norm_final = 0.0;  // certificate value (projected where applicable)
    double f_final = 0.0;
    long long gradient_evals = 0;
    long long value_evals = 0;
    bool success = false;
    std::string flag;  // solver-specific termination flag ("TRUE"/"FALSE"/"")
    std::string status = "success";
    std::vector<StageRow> stages;
    // Solver-specific scalars (observed M, restarts, |j1|, ...), consumed by
    // the benchmark's theorem ledger.
    std::map<std::string, double> metrics;
};

std::string trace_csv(const std::string& run_id, const std::string& solver,
                      const std::vector<StageRow>& rows, bool include_wall);

}  // namespace gradnorm
