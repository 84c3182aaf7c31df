#include "yuancert/quadprob.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "yuancert/errors.hpp"

namespace yuancert {

namespace {

constexpr double kDegenerateDeltaTol = 1e-6;
constexpr double kNonzeroEigenTol = 1e-8;

std::vector<Matrix> dense_members(const QuadProblem& prob) {
    std::vector<Matrix> out;
    out.reserve(prob.m());
    for (const SymMatrix& a : prob.matrices) out.push_back(a.dense());
    return out;
}

Vector sample_ball(std::mt19937_64& rng, std::size_t n, double radius) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector x(n);
    double len = 0.0;
    while (len == 0.0) {
        for (double& v : x) v = normal(rng);
        len = norm2(x);
    }
    const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(n));
    for (double& v : x) v *= r / len;
    return x;
}

// Points tried before random sampling when looking for a rank-3 Jacobian.
std::vector<Vector> structured_points(std::size_t n) {
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < n; ++i) {
        Vector e(n, 0.0);
        e[i] = 1.0;
        pts.push_back(e);
        for (std::size_t j = i + 1; j < n; ++j) {
            Vector p = e, q = e;
            p[j] = 1.0;
            q[j] = -1.0;
            pts.push_back(p);
            pts.push_back(q);
        }
    }
    return pts;
}

// Searches for x where the columns `cols` of the Jacobian have rank >= 3.
std::optional<Vector> find_rank3_point(std::span<const Matrix> members, double a, const std::vector<std::size_t>& cols,
                                       int& rank_found) {
    const std::size_t n = members.front().rows();
    std::vector<Matrix> sub;
    for (std::size_t c : cols) sub.push_back(members[c]);
    const auto try_point = [&](const Vector& x) {
        const int r = numerical_rank(jacobian_at(sub, a, x));
        if (r >= 3) {
            rank_found = r;
            return true;
        }
        return false;
    };
    for (const Vector& x : structured_points(n))
        if (try_point(x)) return x;
    std::mt19937_64 rng(kDefaultRankSeed);
    for (int s = 0; s < 5000; ++s) {
        Vector x = sample_ball(rng, n, 1.0);
        if (try_point(x)) return x;
    }
    return std::nullopt;
}

}  // namespace

void QuadProblem::validate() const {
    if (matrices.empty()) throw InputError("quadratic problem needs at least one matrix");
    for (const SymMatrix& a : matrices) {
        if (a.order() != matrices.front().order()) throw InputError("quadratic problem matrices differ in order");
        if (!a.all_finite()) throw InputError("quadratic problem matrix has non-finite entries");
    }
    if (!std::isfinite(ray_constant) || ray_constant == 0.0) throw InputError("ray constant must be finite and nonzero");
}

Matrix jacobian_at(const QuadProblem& prob, std::span<const double> x) {
    prob.validate();
    return jacobian_at(dense_members(prob), prob.ray_constant, x);
}

Matrix jacobian_at(std::span<const Matrix> members, double a, std::span<const double> x) {
    if (members.empty()) throw InputError("jacobian needs at least one matrix");
    const std::size_t n = members.front().rows();
    if (x.size() != n) throw InputError("jacobian point has wrong dimension");
    Matrix j(n + 1, members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (!members[c].is_square() || members[c].rows() != n) throw InputError("jacobian members differ in order");
        Vector col = members[c] * x;
        col.push_back(a);
        j.set_column(c, col);
    }
    return j;
}

RankIncreaseReport rank_increase_check(const QuadProblem& prob, int samples, double radius, std::uint64_t seed) {
    prob.validate();
    return rank_increase_check(dense_members(prob), prob.ray_constant, samples, radius, seed);
}

RankIncreaseReport rank_increase_check(std::span<const Matrix> members, double a, int samples, double radius,
                                       std::uint64_t seed) {
    if (samples < 1) throw InputError("rank check needs at least one sample");
    if (!(radius > 0.0)) throw InputError("rank check radius must be positive");
    if (members.empty()) throw InputError("rank check needs at least one matrix");
    const std::size_t n = members.front().rows();
    RankIncreaseReport out;
    out.rank_at_zero = numerical_rank(jacobian_at(members, a, Vector(n, 0.0)));
    out.max_rank_observed = out.rank_at_zero;
    out.max_rank_point = Vector(n, 0.0);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        Vector x = sample_ball(rng, n, radius);
        const int r = numerical_rank(jacobian_at(members, a, x));
        if (r > out.max_rank_observed) {
            out.max_rank_observed = r;
            out.max_rank_point = std::move(x);
        }
    }
    out.satisfied = out.max_rank_observed <= out.rank_at_zero + 1;
    return out;
}

DependenceResult extract_dependence(const SymMatrix& a, const SymMatrix& b, const SymMatrix& c, double tol) {
    if (a.order() != b.order() || a.order() != c.order()) throw InputError("dependence triple differs in order");
    const double scale = std::max({a.max_abs(), b.max_abs(), c.max_abs()});
    const SymMatrix d = b - c;
    const Spectrum s = sym_eigen(d);
    // Largest-magnitude eigenvalue of B - C.
    const std::size_t pick = std::abs(s.eigenvalues.front()) >= std::abs(s.eigenvalues.back()) ? 0 : d.order() - 1;
    const double lambda = s.eigenvalues[pick];
    if (std::abs(lambda) <= tol * (1.0 + scale) || std::abs(lambda) <= kNonzeroEigenTol * d.max_abs())
        return DependenceEqual{};
    const Vector v = s.basis.column(pick);
    const SymMatrix ac = a - c;
    // At x = v the pointwise relation reads alpha (A - C) v + beta lambda v = 0 with alpha != 0.
    const double delta = -quad_form(ac, v) / lambda;
    SymMatrix res = ac;
    res.add_scaled(delta, d);
    const double residual = res.max_abs();
    if (residual > tol * (1.0 + scale)) return NotDependent{residual};
    return DependenceDelta{delta};
}

SymMatrix dependent_third(const SymMatrix& a, const SymMatrix& b, double delta) {
    if (!std::isfinite(delta) || std::abs(1.0 + delta) < kDegenerateDeltaTol)
        throw DegenerateDelta("delta = " + std::to_string(delta) + " is too close to -1");
    SymMatrix c = a;
    c.add_scaled(delta, b);
    c *= 1.0 / (1.0 + delta);
    return c;
}

FamilyRankResult reduce_family_rank(const QuadProblem& prob, double tol) {
    prob.validate();
    const std::vector<Matrix> dense = dense_members(prob);
    const std::size_t m = prob.m();
    bool jacobian_ok = true;
    std::optional<std::array<std::size_t, 3>> non_affine;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                const auto r = extract_dependence(prob.matrices[i], prob.matrices[j], prob.matrices[k], tol);
                if (!std::holds_alternative<NotDependent>(r)) continue;
                jacobian_ok = false;
                const std::vector<SymMatrix> triple{prob.matrices[i], prob.matrices[j], prob.matrices[k]};
                if (matrix_set_rank(triple, tol).rank <= 2) {
                    if (!non_affine) non_affine = std::array<std::size_t, 3>{i, j, k};
                    continue;
                }
                int jr = 0;
                auto x = find_rank3_point(dense, prob.ray_constant, {i, j, k}, jr);
                if (!x)
                    throw NumericalFailure("independent triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                           std::to_string(k) + ") but no rank-3 Jacobian point was found");
                return JacobianRankWitness{{i, j, k}, std::move(*x), jr};
            }

    FamilyRankReduced out;
    out.rank = matrix_set_rank(prob.matrices, tol);
    if (out.rank.rank > 2) throw NumericalFailure("every triple is dependent but the set rank exceeds 2");
    out.jacobian_rank_bounded = jacobian_ok;
    if (non_affine) {
        int jr = 0;
        const std::vector<std::size_t> cols{(*non_affine)[0], (*non_affine)[1], (*non_affine)[2]};
        out.jacobian_witness = find_rank3_point(dense, prob.ray_constant, cols, jr);
    }
    return out;
}

CertificateReport quad_certificate(const QuadProblem& prob) {
    prob.validate();
    if (prob.ray_constant != -1.0) throw InputError("the quadratic certificate requires ray constant -1");
    const RankIncreaseReport sampled = rank_increase_check(prob);
    const FamilyRankResult reduced = reduce_family_rank(prob);

    CertificateReport report;
    if (const auto* w = std::get_if<JacobianRankWitness>(&reduced)) {
        report.outcome = HypothesisViolation{"matrix set rank exceeds 2: members " + std::to_string(w->triple[0]) + ", " +
                                             std::to_string(w->triple[1]) + ", " + std::to_string(w->triple[2]) +
                                             " are independent and the Jacobian has rank " +
                                             std::to_string(w->jacobian_rank) + " at a sampled point"};
        report.residuals["jacobian_hypothesis"] = 0.0;
    } else {
        const auto& ok = std::get<FamilyRankReduced>(reduced);
        report = certify_rank2(prob.matrices, FirstOrderCone::whole_space(prob.n()));
        report.residuals["set_rank"] = ok.rank.rank;
        report.residuals["jacobian_hypothesis"] = ok.jacobian_rank_bounded ? 1.0 : 0.0;
    }
    report.residuals["rank_at_zero"] = sampled.rank_at_zero;
    report.residuals["max_jacobian_rank"] = sampled.max_rank_observed;
    return report;
}

KKTData to_kkt(const QuadProblem& prob) {
    prob.validate();
    if (prob.ray_constant != -1.0) throw InputError("KKT form requires ray constant -1");
    const std::size_t n = prob.n();
    KKTData d;
    d.n = n + 1;
    d.grad_f = Vector(n + 1, 0.0);
    d.grad_f[n] = 1.0;
    d.hess_f = SymMatrix(n + 1);
    Vector grad_g(n + 1, 0.0);
    grad_g[n] = -1.0;
    for (std::size_t i = 0; i < prob.m(); ++i) {
        d.grad_g.push_back(grad_g);
        d.hess_g.push_back(block_diag(prob.matrices[i], 1));
        d.active.push_back(i);
    }
    d.g_values = Vector(prob.m(), 0.0);
    return d;
}

}  // namespace yuancert
