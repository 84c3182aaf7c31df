#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "yuancert/cone.hpp"
#include "yuancert/matrix.hpp"
#include "yuancert/yuan.hpp"

namespace yuancert {

inline constexpr double kActivityTol = 1e-8;

/// First- and second-order data of  min f(x) s.t. h(x) = 0, g(x) <= 0  frozen at a candidate x*.
///
/// `active` lists 0-based indices into the inequality constraints. When it is left empty and
/// g_values is supplied, use with_active_from_values() to derive it.
struct KKTData {
    std::size_t n = 0;
    Vector grad_f;
    std::vector<Vector> grad_h;
    std::vector<Vector> grad_g;
    SymMatrix hess_f;
    std::vector<SymMatrix> hess_h;
    std::vector<SymMatrix> hess_g;
    std::vector<std::size_t> active;
    std::optional<Vector> g_values;

    std::size_t p1() const noexcept { return grad_h.size(); }
    std::size_t p2() const noexcept { return grad_g.size(); }

    /// Throws InputError on any inconsistency.
    void validate() const;
    /// Copy with `active` = {i : |g_i| <= tol}. Requires g_values.
    KKTData with_active_from_values(double tol = kActivityTol) const;
};

/// (lambda, mu); mu has one entry per inequality and is zero off the active set.
struct MultiplierPoint {
    Vector lambda;
    Vector mu;
};

/// hess_f + sum lambda_i hess_h_i + sum mu_i hess_g_i
SymMatrix lagrangian_hessian(const KKTData& data, const MultiplierPoint& pt);

/// grad_f + sum lambda_i grad_h_i + sum mu_i grad_g_i
Vector lagrangian_gradient(const KKTData& data, const MultiplierPoint& pt);

bool check_mfcq(const KKTData& data);

/// Vertices of {(lambda, mu_active) : grad L = 0, mu_active >= 0}, sorted lexicographically
/// as (lambda, mu). Throws EmptyMultiplierSet or UnboundedDetected.
std::vector<MultiplierPoint> multiplier_vertices(const KKTData& data);

/// Orthonormal basis of the lineality space of the critical cone: the null space of the
/// equality gradients, the active inequality gradients and grad f.
std::vector<Vector> critical_cone_lineality(const KKTData& data);

struct GscResult {
    bool holds = false;
    std::vector<std::size_t> always_zero;  // active indices with mu_i = 0 at every vertex
};

/// Generalized strict complementarity: at most one active index has mu_i = 0 on all of the
/// multiplier set. Checked on the vertices, since mu_i is linear on the polytope.
GscResult check_gsc(const KKTData& data);
GscResult check_gsc(const KKTData& data, const std::vector<MultiplierPoint>& vertices);

/// Throws ConeNotCritical when K is not contained in the critical cone.
void require_critical(const KKTData& data, const FirstOrderCone& k, double tol = 1e-8);

struct SecondOrderResult {
    CertificateReport report;
    std::vector<MultiplierPoint> vertices;
    std::optional<MultiplierPoint> multiplier;  // set when the report is Certified
    FirstOrderCone cone;
};

/// Single-multiplier second-order certificate: enumerates the multiplier vertices, certifies
/// the family of vertex Hessians on K (default: critical-cone lineality) and recombines the
/// vertex multipliers with the certificate weights. Throws MfcqFailed when MFCQ does not hold.
SecondOrderResult second_order_certificate(const KKTData& data, std::optional<FirstOrderCone> k = std::nullopt);

}  // namespace yuancert
