#include "yuancert/lp.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "yuancert/errors.hpp"

namespace yuancert {

namespace {

constexpr double kCostTol = 1e-10;
constexpr double kPivotTol = 1e-11;
constexpr int kMaxPivots = 50000;

struct Tableau {
    std::size_t rows;
    std::size_t cols;  // structural + artificial columns, rhs stored separately
    Matrix t;
    Vector rhs;
    std::vector<std::size_t> basis;

    void pivot(std::size_t r, std::size_t c) {
        const double p = t(r, c);
        for (std::size_t j = 0; j < cols; ++j) t(r, j) /= p;
        rhs[r] /= p;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const double f = t(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t(i, j) -= f * t(r, j);
            rhs[i] -= f * rhs[r];
        }
        basis[r] = c;
    }

    void drop_row(std::size_t r) {
        Matrix nt(rows - 1, cols);
        Vector nrhs;
        std::vector<std::size_t> nbasis;
        for (std::size_t i = 0, k = 0; i < rows; ++i) {
            if (i == r) continue;
            for (std::size_t j = 0; j < cols; ++j) nt(k, j) = t(i, j);
            nrhs.push_back(rhs[i]);
            nbasis.push_back(basis[i]);
            ++k;
        }
        t = std::move(nt);
        rhs = std::move(nrhs);
        basis = std::move(nbasis);
        --rows;
    }
};

enum class PhaseResult { Optimal, Unbounded };

// Maximizes cost^T z over the tableau, restricted to columns < allowed.
PhaseResult run_phase(Tableau& tab, const Vector& cost, std::size_t allowed) {
    for (int iter = 0; iter < kMaxPivots; ++iter) {
        std::size_t enter = allowed;
        for (std::size_t j = 0; j < allowed; ++j) {
            double d = cost[j];
            for (std::size_t i = 0; i < tab.rows; ++i) d -= cost[tab.basis[i]] * tab.t(i, j);
            if (d > kCostTol) {
                enter = j;
                break;
            }
        }
        if (enter == allowed) return PhaseResult::Optimal;
        std::size_t leave = tab.rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < tab.rows; ++i) {
            const double a = tab.t(i, enter);
            if (a <= kPivotTol) continue;
            const double ratio = tab.rhs[i] / a;
            if (ratio < best_ratio - 1e-14 ||
                (std::abs(ratio - best_ratio) <= 1e-14 && leave < tab.rows && tab.basis[i] < tab.basis[leave])) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == tab.rows) return PhaseResult::Unbounded;
        tab.pivot(leave, enter);
    }
    throw NumericalFailure("simplex pivot limit reached");
}

}  // namespace

LpResult lp_solve(const Vector& c, const Matrix& a_eq, const Vector& b_eq, const std::vector<bool>& nonneg) {
    const std::size_t nvar = c.size();
    const std::size_t m = a_eq.rows();
    if (a_eq.cols() != nvar || b_eq.size() != m || nonneg.size() != nvar)
        throw InputError("lp_solve dimension mismatch");

    // z = (split structural variables) ; free y_j = z_pos - z_neg.
    std::vector<std::size_t> pos(nvar), neg(nvar, SIZE_MAX);
    std::size_t nz = 0;
    for (std::size_t j = 0; j < nvar; ++j) {
        pos[j] = nz++;
        if (!nonneg[j]) neg[j] = nz++;
    }

    Tableau tab{m, nz + m, Matrix(m, nz + m), Vector(m), std::vector<std::size_t>(m)};
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b_eq[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < nvar; ++j) {
            tab.t(i, pos[j]) = sign * a_eq(i, j);
            if (neg[j] != SIZE_MAX) tab.t(i, neg[j]) = -sign * a_eq(i, j);
        }
        tab.t(i, nz + i) = 1.0;
        tab.rhs[i] = sign * b_eq[i];
        tab.basis[i] = nz + i;
    }

    Vector phase1(nz + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1[nz + i] = -1.0;
    run_phase(tab, phase1, nz + m);
    double infeas = 0.0;
    for (std::size_t i = 0; i < tab.rows; ++i)
        if (tab.basis[i] >= nz) infeas += tab.rhs[i];
    if (infeas > 1e-9 * (1.0 + max_abs(b_eq))) return {LpStatus::Infeasible, 0.0, {}};

    // Drive artificial variables out of the basis; rows where that is impossible are redundant.
    for (std::size_t i = 0; i < tab.rows;) {
        if (tab.basis[i] < nz) {
            ++i;
            continue;
        }
        std::size_t col = nz;
        for (std::size_t j = 0; j < nz; ++j)
            if (std::abs(tab.t(i, j)) > 1e-9) {
                col = j;
                break;
            }
        if (col == nz) {
            tab.drop_row(i);
        } else {
            tab.pivot(i, col);
            ++i;
        }
    }

    Vector phase2(nz + m, 0.0);
    for (std::size_t j = 0; j < nvar; ++j) {
        phase2[pos[j]] = c[j];
        if (neg[j] != SIZE_MAX) phase2[neg[j]] = -c[j];
    }
    if (run_phase(tab, phase2, nz) == PhaseResult::Unbounded) return {LpStatus::Unbounded, 0.0, {}};

    Vector z(nz + m, 0.0);
    for (std::size_t i = 0; i < tab.rows; ++i) z[tab.basis[i]] = tab.rhs[i];
    LpResult out{LpStatus::Optimal, 0.0, Vector(nvar, 0.0)};
    for (std::size_t j = 0; j < nvar; ++j) {
        out.solution[j] = z[pos[j]] - (neg[j] != SIZE_MAX ? z[neg[j]] : 0.0);
        out.optimum += c[j] * out.solution[j];
    }
    return out;
}

}  // namespace yuancert
