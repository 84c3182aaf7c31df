#include "yuancert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>

#include "yuancert/errors.hpp"
#include "yuancert/lp.hpp"
#include "yuancert/numeric_core.hpp"

namespace yuancert::oracle {

namespace {

constexpr double kSearchTol = 1e-10;
constexpr double kInvPhi = 0.6180339887498949;

std::vector<SymMatrix> restrict_all(std::span<const SymMatrix> family, const Matrix& basis) {
    std::vector<SymMatrix> out;
    out.reserve(family.size());
    for (const SymMatrix& a : family) out.push_back(restrict(a, basis));
    return out;
}

double smallest_eigenvalue(const SymMatrix& m) {
    if (m.order() == 1) return m(0, 0);
    if (m.order() == 2) {
        const double mean = 0.5 * (m(0, 0) + m(1, 1));
        const double half = 0.5 * (m(0, 0) - m(1, 1));
        return mean - std::hypot(half, m(0, 1));
    }
    return sym_eigenvalues(m).front();
}

// Golden-section maximization of a concave function on [lo, hi]; returns (argmax, max).
std::pair<double, double> maximize_concave(const std::function<double(double)>& f, double lo, double hi) {
    if (hi - lo <= kSearchTol) {
        const double mid = 0.5 * (lo + hi);
        return {mid, f(mid)};
    }
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > kSearchTol * std::max(1.0, std::abs(lo) + std::abs(hi))) {
        if (fc < fd) {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kInvPhi * (hi - lo);
            fd = f(d);
        } else {
            hi = d;
            d = c;
            fd = fc;
            c = hi - kInvPhi * (hi - lo);
            fc = f(c);
        }
    }
    std::pair<double, double> best{lo, f(lo)};
    for (double x : {hi, c, d}) {
        const double v = f(x);
        if (v > best.second) best = {x, v};
    }
    return best;
}

// Vertical slice {b : (a, b) in hull(points)}; every extreme point lies on a segment between two points.
std::pair<double, double> hull_slice(const std::vector<std::pair<double, double>>& pts, double a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const auto take = [&](double b) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto [ai, bi] = pts[i];
        if (std::abs(ai - a) <= kSearchTol) take(bi);
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const auto [aj, bj] = pts[j];
            if ((ai - a) * (aj - a) > 0.0 || ai == aj) continue;
            const double s = (a - ai) / (aj - ai);
            take(bi + s * (bj - bi));
        }
    }
    if (lo > hi) {
        // Rounding left a outside every segment; snap to the nearest point.
        std::size_t near = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (std::abs(pts[i].first - a) < std::abs(pts[near].first - a)) near = i;
        lo = hi = pts[near].second;
    }
    return {lo, hi};
}

// Convex weights whose image under the point map is closest to target in the L1 sense.
SimplexWeights recover_weights(const std::vector<std::pair<double, double>>& pts, double a, double b) {
    const std::size_t m = pts.size();
    // Variables: t (m), then s+ and s- for the two coordinates.
    const std::size_t nv = m + 4;
    Matrix eq(3, nv);
    for (std::size_t i = 0; i < m; ++i) {
        eq(0, i) = pts[i].first;
        eq(1, i) = pts[i].second;
        eq(2, i) = 1.0;
    }
    eq(0, m) = 1.0;
    eq(0, m + 1) = -1.0;
    eq(1, m + 2) = 1.0;
    eq(1, m + 3) = -1.0;
    Vector cost(nv, 0.0);
    for (std::size_t j = m; j < nv; ++j) cost[j] = -1.0;
    const LpResult r = lp_solve(cost, eq, {a, b, 1.0}, std::vector<bool>(nv, true));
    if (r.status != LpStatus::Optimal) throw NumericalFailure("hull weight recovery failed");
    Vector t(r.solution.begin(), r.solution.begin() + static_cast<std::ptrdiff_t>(m));
    for (double& v : t) v = std::max(v, 0.0);
    return SimplexWeights::normalized(std::move(t));
}

void compositions(std::size_t m, int total, Vector& cur, std::size_t idx, const std::function<void(const Vector&)>& f) {
    if (idx + 1 == m) {
        cur[idx] = total;
        f(cur);
        return;
    }
    for (int v = total; v >= 0; --v) {
        cur[idx] = v;
        compositions(m, total - v, cur, idx + 1, f);
    }
}

}  // namespace

SampleVerdict sample_max_nonneg(std::span<const SymMatrix> family, const FirstOrderCone& k, int samples,
                                std::uint64_t seed) {
    if (family.empty()) throw InputError("oracle needs a nonempty family");
    if (samples < 1) throw InputError("oracle needs at least one sample");
    const std::size_t dim = k.span_dim();
    if (dim == 0) return NoWitnessFound{};
    const Matrix basis = span_basis(k);
    const std::vector<SymMatrix> restricted = restrict_all(family, basis);
    const double thr = -kCertTol * family_scale(family);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vector y(dim);
    for (int s = 0; s < samples; ++s) {
        for (double& v : y) v = normal(rng);
        const double len = norm2(y);
        if (len == 0.0) continue;
        for (double& v : y) v /= len;
        bool all_negative = true;
        for (const SymMatrix& r : restricted)
            if (quad_form(r, y) >= thr) {
                all_negative = false;
                break;
            }
        if (!all_negative) continue;

        Witness w{lift_into_cone(k, basis, y), {}};
        bool verified = cone_contains(k, w.x, 1e-8);
        for (const SymMatrix& a : family) {
            w.form_values.push_back(quad_form(a, w.x));
            verified = verified && w.form_values.back() < thr;
        }
        if (verified) return w;
    }
    return NoWitnessFound{};
}

SearchResult simplex_grid_search(std::span<const SymMatrix> family, const FirstOrderCone& k, int resolution) {
    if (family.empty()) throw InputError("oracle needs a nonempty family");
    if (resolution < 1) throw InputError("grid resolution must be positive");
    const std::size_t m = family.size();
    if (k.span_dim() == 0) return {SimplexWeights::uniform(m), 0.0};
    const std::vector<SymMatrix> restricted = restrict_all(family, span_basis(k));
    const std::size_t dim = k.span_dim();

    Vector best_counts;
    double best = -std::numeric_limits<double>::infinity();
    Vector cur(m, 0.0);
    SymMatrix combo(dim);
    compositions(m, resolution, cur, 0, [&](const Vector& counts) {
        combo *= 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (counts[i] != 0.0) combo.add_scaled(counts[i] / resolution, restricted[i]);
        const double lam = smallest_eigenvalue(combo);
        if (lam > best) {
            best = lam;
            best_counts = counts;
        }
    });
    for (double& v : best_counts) v /= resolution;
    return {SimplexWeights::normalized(std::move(best_counts)), best};
}

SearchResult hull_psd_search(std::span<const SymMatrix> family, const FirstOrderCone& k) {
    if (family.empty()) throw InputError("oracle needs a nonempty family");
    const std::size_t m = family.size();
    const SetRank sr = matrix_set_rank(family);
    if (sr.rank > 2) throw HypothesisViolated("hull search needs set rank at most 2, got " + std::to_string(sr.rank));
    if (k.span_dim() == 0 || sr.rank == 0) return {SimplexWeights::uniform(m), 0.0};

    const Matrix basis = span_basis(k);
    const SymMatrix r1 = restrict(family[sr.basis[0]], basis);
    const SymMatrix r2 = sr.rank == 2 ? restrict(family[sr.basis[1]], basis) : SymMatrix(r1.order());
    const std::vector<std::pair<double, double>>& pts = *sr.coordinates;

    const auto phi = [&](double a, double b) {
        SymMatrix c = r1;
        c *= a;
        c.add_scaled(b, r2);
        return smallest_eigenvalue(c);
    };

    double amin = pts.front().first, amax = amin;
    for (const auto& p : pts) {
        amin = std::min(amin, p.first);
        amax = std::max(amax, p.first);
    }
    const auto inner = [&](double a) {
        const auto [lo, hi] = hull_slice(pts, a);
        return maximize_concave([&](double b) { return phi(a, b); }, lo, hi);
    };
    const auto [a_star, unused] = maximize_concave([&](double a) { return inner(a).second; }, amin, amax);
    (void)unused;
    const double b_star = inner(a_star).first;

    const SimplexWeights t = recover_weights(pts, a_star, b_star);
    return {t, restricted_lambda_min(family, t, basis)};
}

}  // namespace yuancert::oracle
