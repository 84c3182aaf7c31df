#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "yuancert/matrix.hpp"

namespace yuancert {

/// A first-order cone K = V + {s * d : s >= 0}: a subspace plus at most one ray.
///
/// The subspace is held as an orthonormal basis. The ray is stored as the unit
/// component of the user's direction orthogonal to V; a direction whose orthogonal
/// component is below kRayAbsorbTol is absorbed and the cone equals V.
class FirstOrderCone {
public:
    static constexpr double kRayAbsorbTol = 1e-8;

    /// R^n.
    static FirstOrderCone whole_space(std::size_t n);
    /// Cone spanned by `subspace_vectors` (need not be independent) plus an optional ray.
    static FirstOrderCone make(std::size_t n, std::span<const Vector> subspace_vectors,
                               std::optional<Vector> ray = std::nullopt);

    std::size_t ambient_dim() const noexcept { return n_; }
    const std::vector<Vector>& subspace() const noexcept { return subspace_; }
    const std::optional<Vector>& ray() const noexcept { return ray_; }
    /// Dimension of span(K).
    std::size_t span_dim() const noexcept { return subspace_.size() + (ray_ ? 1 : 0); }

private:
    std::size_t n_ = 0;
    std::vector<Vector> subspace_;
    std::optional<Vector> ray_;
};

/// Orthonormal basis of span(K) as an n x k matrix: subspace columns first, then the ray.
Matrix span_basis(const FirstOrderCone& k);

/// B^T M B. Quadratic forms are even, so M is PSD on K iff restrict(M, span_basis(K)) is PSD.
/// Throws InputError when B has no columns.
SymMatrix restrict(const SymMatrix& m, const Matrix& basis);

bool cone_contains(const FirstOrderCone& k, std::span<const double> x, double tol = 1e-9);

/// Maps coordinates y in span(K) to an ambient vector that lies in K, flipping the sign
/// when the ray coordinate is negative.
Vector lift_into_cone(const FirstOrderCone& k, const Matrix& basis, std::span<const double> y);

}  // namespace yuancert
