#pragma once

#include <vector>

#include "yuancert/matrix.hpp"

namespace yuancert {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double optimum = 0.0;
    Vector solution;  // an optimal basic solution when status == Optimal
};

/// maximize c^T y  subject to  A_eq y = b_eq,  y_i >= 0 where nonneg[i], y_i free otherwise.
///
/// Dense two-phase simplex with Bland's rule, so it never cycles. Free variables are split
/// into positive and negative parts internally.
LpResult lp_solve(const Vector& c, const Matrix& a_eq, const Vector& b_eq, const std::vector<bool>& nonneg);

}  // namespace yuancert
