#pragma once

#include <stdexcept>
#include <string>

namespace gradnorm {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    oracle_not_finite,
    objective_not_smooth,       // backtracking exceeded its doubling cap
    gradient_locally_constant,  // initial curvature probe found no variation
    schedule_not_increasing,
    distance_guess_diverged,
    curvature_model_violated,
    curvature_search_diverged,
    restart_limit,
    singular_problem,
    unknown_name,
    io_error,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gradnorm
