#include "gradnorm/report.hpp"

#include <cstdio>

namespace gradnorm {

namespace {

void append_double(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

// Shared by the C API and the tests so rerun byte-comparisons always see the
// same serialization. include_wall=false zeroes the wall_ns column, the only
// field that can differ between identical reruns.
std::string trace_csv(const std::string& run_id, const std::string& solver,
                      const std::vector<StageRow>& rows, bool include_wall) {
    std::string out = "run_id,solver,stage_or_outer_index,sigma_or_l,grad_evals_cum,grad_norm,"
                      "f_value,wall_ns\n";
    for (const StageRow& r : rows) {
        out += run_id;
        out += ',';
        out += solver;
        out += ',';
        out += std::to_string(r.index);
        out += ',';
        append_double(out, r.sigma_or_l);
        out += ',';
        out += std::to_string(r.grad_evals_cum);
        out += ',';
        append_double(out, r.grad_norm);
        out += ',';
        append_double(out, r.f_value);
        out += ',';
        out += std::to_string(include_wall ? r.wall_ns : 0);
        out += '\n';
    }
    return out;
}

}  // namespace gradnorm
