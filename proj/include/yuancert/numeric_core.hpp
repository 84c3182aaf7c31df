#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "yuancert/matrix.hpp"

namespace yuancert {

inline constexpr double kDefaultPsdTol = 1e-9;
inline constexpr double kDefaultRankTol = 1e-9;

/// Eigenvalues in ascending order; column j of `basis` is the eigenvector for eigenvalues[j].
struct Spectrum {
    Vector eigenvalues;
    Matrix basis;
};

/// Cyclic Jacobi eigendecomposition. Rotations sweep (p,q) in row order, so the
/// result is deterministic for a fixed input.
Spectrum sym_eigen(const SymMatrix& m);

/// Eigenvalues only (ascending); same iteration as sym_eigen without accumulating rotations.
Vector sym_eigenvalues(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);

struct NegativeDirection {
    Vector x;      // unit vector
    double value;  // x^T M x
};

struct PsdVerdict {
    double min_eigenvalue = 0.0;
    std::optional<NegativeDirection> negative;

    bool psd() const noexcept { return !negative.has_value(); }
};

/// PSD iff the smallest eigenvalue is >= -tol * (1 + max|M_ij|).
PsdVerdict is_psd(const SymMatrix& m, double tol = kDefaultPsdTol);

double quad_form(const SymMatrix& m, std::span<const double> x);
double quad_form(const Matrix& m, std::span<const double> x);

/// Members of a family of square matrices with one common order. General square
/// members are accepted here; the certificate pipelines take symmetric families.
class MatrixFamily {
public:
    explicit MatrixFamily(std::vector<Matrix> members);
    explicit MatrixFamily(std::span<const SymMatrix> members);

    std::size_t size() const noexcept { return members_.size(); }
    std::size_t order() const noexcept { return order_; }
    const Matrix& operator[](std::size_t i) const { return members_[i]; }
    bool all_symmetric() const noexcept;

private:
    std::vector<Matrix> members_;
    std::size_t order_ = 0;
};

struct SetRank {
    int rank = 0;
    /// Indices of the members chosen as basis, in family order (size = min(rank, 2) when rank <= 2).
    std::vector<std::size_t> basis;
    /// When rank <= 2: coordinates of every member in the basis. Entry i is (alpha_i, beta_i);
    /// beta_i = 0 when the basis has a single member.
    std::optional<std::vector<std::pair<double, double>>> coordinates;
};

/// Numerical rank of the flattened members by column-pivoted Gram-Schmidt. A member is
/// independent when its pivot exceeds tol * (largest pivot).
SetRank matrix_set_rank(const MatrixFamily& family, double tol = kDefaultRankTol);
SetRank matrix_set_rank(std::span<const SymMatrix> family, double tol = kDefaultRankTol);

/// Numerical rank of the columns of an arbitrary matrix, same pivoting rule.
int numerical_rank(const Matrix& m, double tol = kDefaultRankTol);

/// Least-squares (alpha, beta) with A ~ alpha*B1 + beta*B2 in the trace inner product.
/// Throws DegenerateBasis if {B1, B2} is dependent and NotInSpan if the residual
/// exceeds tol * (1 + max|A_ij|).
std::pair<double, double> express_in_basis(const SymMatrix& a, const SymMatrix& b1, const SymMatrix& b2,
                                           double tol = kDefaultRankTol);

/// Upper-triangle flattening with off-diagonals scaled by sqrt(2): the Euclidean inner
/// product of two flattenings equals the trace inner product of the matrices.
Vector flatten_symmetric(const SymMatrix& m);
Vector flatten_full(const Matrix& m);

}  // namespace yuancert
