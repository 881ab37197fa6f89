#pragma once

#include <cmath>

namespace gradnorm {

// Sublinear-rate constant of the accelerated subroutine with backtracking:
// the per-stage gap satisfies gap <= (c_A * L / N^2) * dist^2.
inline constexpr double kCA = 4.0;

// Universal constant C1 = 3 + 16*sqrt(2*c_A) from the parameter-free
// complexity bounds.
inline const double kC1 = 3.0 + 16.0 * std::sqrt(2.0 * kCA);

}  // namespace gradnorm
