#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "yuancert/matrix.hpp"
#include "yuancert/nlp.hpp"
#include "yuancert/numeric_core.hpp"
#include "yuancert/yuan.hpp"

namespace yuancert {

/// min z  s.t.  (1/2) x^T A_i x - z <= 0,  i = 1..m.
/// `ray_constant` is the last entry of every constraint gradient (A_i x; a). The optimization
/// problem has a = -1; other nonzero values are accepted for Jacobian rank experiments.
struct QuadProblem {
    std::vector<SymMatrix> matrices;
    double ray_constant = -1.0;

    std::size_t n() const { return matrices.front().order(); }
    std::size_t m() const noexcept { return matrices.size(); }
    void validate() const;
};

/// (n+1) x m matrix whose column i is (A_i x; a).
Matrix jacobian_at(const QuadProblem& prob, std::span<const double> x);
/// Same for general square members; used to show that symmetry cannot be dropped.
Matrix jacobian_at(std::span<const Matrix> members, double a, std::span<const double> x);

struct RankIncreaseReport {
    int rank_at_zero = 0;
    int max_rank_observed = 0;
    bool satisfied = false;
    Vector max_rank_point;  // a sampled x attaining max_rank_observed
};

inline constexpr int kDefaultRankSamples = 1000;
inline constexpr double kDefaultRankRadius = 1.0;
inline constexpr std::uint64_t kDefaultRankSeed = 42;

/// Samples x uniformly in the ball of the given radius and records the largest Jacobian rank.
/// Satisfied when that rank exceeds the rank at x = 0 by at most one.
RankIncreaseReport rank_increase_check(const QuadProblem& prob, int samples = kDefaultRankSamples,
                                       double radius = kDefaultRankRadius, std::uint64_t seed = kDefaultRankSeed);
RankIncreaseReport rank_increase_check(std::span<const Matrix> members, double a, int samples = kDefaultRankSamples,
                                       double radius = kDefaultRankRadius, std::uint64_t seed = kDefaultRankSeed);

struct DependenceEqual {};  // B = C
struct DependenceDelta {
    double delta;  // A - C + delta (B - C) = 0
};
struct NotDependent {
    double residual;
};
using DependenceResult = std::variant<DependenceEqual, DependenceDelta, NotDependent>;

/// Recovers delta with A - C + delta (B - C) = 0 from an eigenvector of B - C, then checks the
/// identity on the whole matrix.
DependenceResult extract_dependence(const SymMatrix& a, const SymMatrix& b, const SymMatrix& c,
                                    double tol = kDefaultRankTol);

/// C = (A + delta B) / (1 + delta), the triple for which extract_dependence must return delta.
/// Throws DegenerateDelta when |1 + delta| is too small for C to be well defined.
SymMatrix dependent_third(const SymMatrix& a, const SymMatrix& b, double delta);

struct FamilyRankReduced {
    SetRank rank;  // rank <= 2, basis indices and coordinates
    /// True when every triple satisfies A - C + delta (B - C) = 0 or B = C, which is exactly
    /// the condition for rank J(x) <= 2 at every x.
    bool jacobian_rank_bounded = true;
    std::optional<Vector> jacobian_witness;  // rank J(x) = 3 here when the bound fails
};
struct JacobianRankWitness {
    std::array<std::size_t, 3> triple;  // an independent triple
    Vector witness;                      // x with rank J(x) >= 3
    int jacobian_rank;
};
using FamilyRankResult = std::variant<FamilyRankReduced, JacobianRankWitness>;

/// Checks every triple of members for a linear dependence. On success returns the set rank
/// (at most 2) with basis and coordinates; otherwise returns a point where the Jacobian has
/// rank 3. Throws NumericalFailure if no such point is found within the sample budget.
/// A linearly dependent family may still have rank J(x) = 3 somewhere; see jacobian_rank_bounded.
FamilyRankResult reduce_family_rank(const QuadProblem& prob, double tol = kDefaultRankTol);

/// Certificate for the quadratic problem at the origin. Certifies the family on the whole space
/// when its set rank is at most 2 and reports the Jacobian rank diagnostics as residuals
/// (rank_at_zero, max_jacobian_rank, jacobian_hypothesis, set_rank).
CertificateReport quad_certificate(const QuadProblem& prob);

/// KKT data of the quadratic problem at (x, z) = (0, 0); requires a = -1.
KKTData to_kkt(const QuadProblem& prob);

}  // namespace yuancert
