#include "yuancert/yuan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <tuple>
#include <random>
#include <vector>

#include "yuancert/errors.hpp"

namespace yuancert {

SimplexWeights::SimplexWeights(Vector t) : t_(std::move(t)) {
    if (t_.empty()) throw InputError("simplex weights must be nonempty");
    double sum = 0.0;
    for (double v : t_) {
        if (!(v >= 0.0)) throw InputError("simplex weights must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InputError("simplex weights must sum to one");
}

SimplexWeights SimplexWeights::normalized(Vector t) {
    double sum = 0.0;
    for (double& v : t) {
        if (!std::isfinite(v) || v < -1e-9) throw InputError("weights have a negative or non-finite entry");
        v = std::max(v, 0.0);
        sum += v;
    }
    if (!(sum > 0.0)) throw InputError("weights sum to zero");
    for (double& v : t) v /= sum;
    return SimplexWeights(std::move(t));
}

SimplexWeights SimplexWeights::uniform(std::size_t m) {
    return normalized(Vector(m, 1.0));
}

SimplexWeights SimplexWeights::unit(std::size_t m, std::size_t i) {
    Vector t(m, 0.0);
    t.at(i) = 1.0;
    return SimplexWeights(std::move(t));
}

double family_scale(std::span<const SymMatrix> family) {
    double m = 0.0;
    for (const SymMatrix& a : family) m = std::max(m, a.max_abs());
    return 1.0 + m;
}

namespace {

SymMatrix combine(std::span<const SymMatrix> family, std::span<const double> t) {
    SymMatrix out(family.front().order());
    for (std::size_t i = 0; i < family.size(); ++i)
        if (t[i] != 0.0) out.add_scaled(t[i], family[i]);
    return out;
}

}  // namespace

double restricted_lambda_min(std::span<const SymMatrix> family, const SimplexWeights& t, const Matrix& basis) {
    if (family.size() != t.size()) throw InputError("weights and family sizes differ");
    if (basis.cols() == 0) return 0.0;
    return sym_eigenvalues(restrict(combine(family, t.values()), basis)).front();
}

double lambda_min_profile(const SymMatrix& a, const SymMatrix& b, double t) {
    if (a.order() != b.order()) throw InputError("pencil matrices have different orders");
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("pencil parameter must lie in [0, 1]");
    SymMatrix c = t * a;
    c.add_scaled(1.0 - t, b);
    return sym_eigenvalues(c).front();
}

bool certificate_holds(std::span<const SymMatrix> family, const FirstOrderCone& k, const SimplexWeights& t) {
    return restricted_lambda_min(family, t, span_basis(k)) >= -kCertTol * family_scale(family);
}

bool refutation_holds(std::span<const SymMatrix> family, const FirstOrderCone& k, std::span<const double> witness) {
    if (witness.size() != k.ambient_dim()) return false;
    const double len = norm2(witness);
    if (!(std::abs(len - 1.0) <= 1e-8)) return false;
    if (!cone_contains(k, witness, 1e-8)) return false;
    const double thr = kCertTol * family_scale(family);
    return std::all_of(family.begin(), family.end(), [&](const SymMatrix& a) { return quad_form(a, witness) < -thr; });
}

namespace {

constexpr double kGoldenTol = 1e-12;
constexpr int kGoldenMaxIter = 200;
constexpr int kWitnessSamples = 20000;
constexpr std::uint64_t kWitnessSeed = 0x5eed;

struct PencilOptimum {
    double t = 0.0;
    double value = -std::numeric_limits<double>::infinity();
    double bracket = 1.0;
};

// Maximizes the concave map t -> lambda_min(tA + (1-t)B) over [0, 1].
PencilOptimum maximize_pencil(const SymMatrix& a, const SymMatrix& b) {
    const auto f = [&](double t) {
        SymMatrix c = t * a;
        c.add_scaled(1.0 - t, b);
        return sym_eigenvalues(c).front();
    };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < kGoldenMaxIter && hi - lo > kGoldenTol; ++it) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    PencilOptimum best;
    best.bracket = hi - lo;
    for (double t : {0.0, 1.0, c, d, 0.5 * (lo + hi)}) {
        const double v = f(t);
        if (v > best.value) {
            best.value = v;
            best.t = t;
        }
    }
    return best;
}

struct WitnessSearch {
    const SymMatrix& a;
    const SymMatrix& b;
    Vector best;
    double best_score = std::numeric_limits<double>::infinity();

    void offer(Vector y) {
        const double len = norm2(y);
        if (!(len > 0.0) || !std::isfinite(len)) return;
        for (double& v : y) v /= len;
        const double score = std::max(quad_form(a, y), quad_form(b, y));
        if (score < best_score) {
            best_score = score;
            best = std::move(y);
        }
    }
};

// Picks y in span(U) so that y^T (A - B) y is as close to zero as possible; on a cluster of
// near-bottom eigenvectors of the optimal pencil member this balances both forms.
Vector balanced_mixture(const SymMatrix& a, const SymMatrix& b, const std::vector<Vector>& u) {
    const Matrix basis = Matrix::from_columns(a.order(), u);
    const Spectrum diff = sym_eigen(restrict(a - b, basis));
    const double d_lo = diff.eigenvalues.front();
    const double d_hi = diff.eigenvalues.back();
    const Vector e_lo = diff.basis.column(0);
    const Vector e_hi = diff.basis.column(diff.basis.cols() - 1);
    Vector y;
    if (d_lo <= 0.0 && d_hi >= 0.0) {
        const double span = d_hi - d_lo;
        const double s2 = span > 0.0 ? -d_lo / span : 0.0;
        const double s = std::sqrt(std::clamp(s2, 0.0, 1.0));
        const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
        y.assign(e_lo.size(), 0.0);
        axpy(c, e_lo, y);
        axpy(s, e_hi, y);
    } else {
        y = std::abs(d_lo) < std::abs(d_hi) ? e_lo : e_hi;
    }
    return basis * y;
}

// Searches span coordinates for y with both restricted forms below -thr.
std::optional<Vector> find_pair_witness(const SymMatrix& a, const SymMatrix& b, double t_opt, double thr) {
    const std::size_t k = a.order();
    WitnessSearch search{a, b, {}};

    SymMatrix c = t_opt * a;
    c.add_scaled(1.0 - t_opt, b);
    const Spectrum spec = sym_eigen(c);
    const double bottom = spec.eigenvalues.front();
    search.offer(spec.basis.column(0));
    if (search.best_score < -thr) return search.best;

    // Balanced mixtures over clusters of near-bottom eigenvectors.
    for (double width : {1e-12, 1e-9, 0.1, 0.5, 0.9}) {
        const double cut = bottom + width * std::max(std::abs(bottom), thr);
        std::vector<Vector> u;
        for (std::size_t j = 0; j < k && spec.eigenvalues[j] <= cut; ++j) u.push_back(spec.basis.column(j));
        if (u.empty()) continue;
        search.offer(balanced_mixture(a, b, u));
        if (search.best_score < -thr) return search.best;
    }

    // Great circles through pairs of bottom eigenvectors.
    const std::size_t bottom_count = std::min<std::size_t>(k, 4);
    for (std::size_t i = 0; i < bottom_count; ++i)
        for (std::size_t j = i + 1; j < bottom_count; ++j) {
            const Vector ui = spec.basis.column(i);
            const Vector uj = spec.basis.column(j);
            const auto at = [&](double theta) {
                Vector y = scaled(std::cos(theta), ui);
                axpy(std::sin(theta), uj, y);
                return y;
            };
            constexpr int kSteps = 720;
            double best_theta = 0.0;
            double best_val = std::numeric_limits<double>::infinity();
            for (int s = 0; s < kSteps; ++s) {
                const double theta = M_PI * s / kSteps;
                const Vector y = at(theta);
                const double v = std::max(quad_form(a, y), quad_form(b, y));
                if (v < best_val) {
                    best_val = v;
                    best_theta = theta;
                }
            }
            double lo = best_theta - M_PI / kSteps, hi = best_theta + M_PI / kSteps;
            for (int it = 0; it < 100; ++it) {
                const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                const Vector y1 = at(m1), y2 = at(m2);
                if (std::max(quad_form(a, y1), quad_form(b, y1)) < std::max(quad_form(a, y2), quad_form(b, y2)))
                    hi = m2;
                else
                    lo = m1;
            }
            search.offer(at(0.5 * (lo + hi)));
            if (search.best_score < -thr) return search.best;
        }

    std::mt19937_64 rng(kWitnessSeed);
    std::normal_distribution<double> normal;
    for (int s = 0; s < kWitnessSamples; ++s) {
        Vector y(k);
        for (double& v : y) v = normal(rng);
        search.offer(std::move(y));
        if (search.best_score < -thr) return search.best;
    }
    return std::nullopt;
}

struct PairOutcome {
    bool certified = false;
    double t = 0.0;
    double lambda_min = 0.0;
    double bracket = 0.0;
    Vector witness;  // ambient, in K
};

// Two-matrix core on already restricted matrices; `thr` is the absolute threshold.
PairOutcome solve_pair(const SymMatrix& a_full, const SymMatrix& b_full, const FirstOrderCone& k,
                       const Matrix& basis, double thr) {
    PairOutcome out;
    if (basis.cols() == 0) {
        out.certified = true;
        out.t = 1.0;
        return out;
    }
    const SymMatrix a = restrict(a_full, basis);
    const SymMatrix b = restrict(b_full, basis);
    const PencilOptimum opt = maximize_pencil(a, b);
    out.t = opt.t;
    out.lambda_min = opt.value;
    out.bracket = opt.bracket;
    if (opt.value >= -thr) {
        out.certified = true;
        return out;
    }
    const auto y = find_pair_witness(a, b, opt.t, thr);
    if (!y)
        throw NumericalFailure("no verified witness found although the pencil maximum " + std::to_string(opt.value) +
                               " is below the certificate threshold");
    out.witness = lift_into_cone(k, basis, *y);
    return out;
}

Vector form_values(std::span<const SymMatrix> family, std::span<const double> x) {
    Vector v;
    v.reserve(family.size());
    for (const SymMatrix& a : family) v.push_back(quad_form(a, x));
    return v;
}

void check_family(std::span<const SymMatrix> family, const FirstOrderCone& k) {
    if (family.empty()) throw InputError("matrix family must be nonempty");
    for (const SymMatrix& a : family) {
        if (a.order() != k.ambient_dim()) throw InputError("family order differs from the cone dimension");
        if (!a.all_finite()) throw InputError("matrix family has non-finite entries");
    }
}

// Recursive reduction of a rank <= 2 family.
class Rank2Solver {
public:
    Rank2Solver(std::span<const SymMatrix> family, const FirstOrderCone& k, double rank_tol)
        : family_(family), cone_(k), basis_(span_basis(k)), rank_tol_(rank_tol),
          thr_(kCertTol * family_scale(family)) {}

    CertificateReport solve(const std::vector<std::size_t>& idx) {
        max_depth_ = std::max(max_depth_, ++depth_);
        CertificateReport r = solve_level(idx);
        --depth_;
        return r;
    }

    int max_depth() const noexcept { return max_depth_; }
    double basis_residual() const noexcept { return basis_residual_; }
    double bracket() const noexcept { return bracket_; }

private:
    CertificateReport certified(Vector t) const {
        SimplexWeights w = SimplexWeights::normalized(std::move(t));
        const double lm = restricted_lambda_min(family_, w, basis_);
        return {Certified{std::move(w), lm}, {}};
    }

    CertificateReport refuted(Vector x) const {
        Vector fv = form_values(family_, x);
        return {Refuted{std::move(x), std::move(fv)}, {}};
    }

    Vector embed(const std::vector<std::pair<std::size_t, double>>& entries) const {
        Vector t(family_.size(), 0.0);
        for (const auto& [i, w] : entries) t[i] += w;
        return t;
    }

    CertificateReport pair(std::size_t i, std::size_t j) {
        const PairOutcome p = solve_pair(family_[i], family_[j], cone_, basis_, thr_);
        bracket_ = std::max(bracket_, p.bracket);
        if (p.certified) return certified(embed({{i, p.t}, {j, 1.0 - p.t}}));
        return refuted(p.witness);
    }

    CertificateReport single(std::size_t i) {
        if (basis_.cols() == 0) return certified(embed({{i, 1.0}}));
        const PsdVerdict v = is_psd(restrict(family_[i], basis_), 0.0);
        if (v.min_eigenvalue >= -thr_) return certified(embed({{i, 1.0}}));
        return refuted(lift_into_cone(cone_, basis_, v.negative->x));
    }

    // All members are c_i * A0 with A0 = family_[base].
    CertificateReport rank_one(const std::vector<std::size_t>& idx, std::size_t base,
                               const std::vector<std::pair<double, double>>& coords) {
        std::vector<double> c(idx.size());
        for (std::size_t p = 0; p < idx.size(); ++p) c[p] = coords[p].first;
        if (basis_.cols() == 0) return certified(embed({{idx.front(), 1.0}}));
        const Spectrum s = sym_eigen(restrict(family_[base], basis_));

        std::optional<CertificateReport> best;
        double best_value = -std::numeric_limits<double>::infinity();
        const auto consider = [&](Vector t) {
            CertificateReport r = certified(std::move(t));
            const double v = r.certified()->lambda_min;
            if (v >= -thr_ && v > best_value) {
                best_value = v;
                best = std::move(r);
            }
        };
        const auto imax = static_cast<std::size_t>(std::max_element(c.begin(), c.end()) - c.begin());
        const auto imin = static_cast<std::size_t>(std::min_element(c.begin(), c.end()) - c.begin());
        if (c[imax] > 0.0) consider(embed({{idx[imax], 1.0}}));
        if (c[imin] < 0.0) consider(embed({{idx[imin], 1.0}}));
        if (c[imax] > 0.0 && c[imin] < 0.0) {
            const double span = c[imax] - c[imin];
            consider(embed({{idx[imax], -c[imin] / span}, {idx[imin], c[imax] / span}}));
        }
        for (std::size_t p = 0; p < idx.size(); ++p)
            if (c[p] == 0.0) consider(embed({{idx[p], 1.0}}));
        if (best) return *best;

        // Every coefficient has one sign and that multiple of A0 is not PSD on K.
        const Vector y = c[imax] > 0.0 ? s.basis.column(0) : s.basis.column(s.basis.cols() - 1);
        return refuted(lift_into_cone(cone_, basis_, y));
    }

    bool negligible(double coef, std::size_t basis_member, std::size_t member) const {
        return std::abs(coef) * family_[basis_member].max_abs() <= 1e-10 * (1.0 + family_[member].max_abs());
    }

    static std::vector<std::size_t> without(const std::vector<std::size_t>& idx, std::size_t drop) {
        std::vector<std::size_t> out;
        for (std::size_t i : idx)
            if (i != drop) out.push_back(i);
        return out;
    }

    CertificateReport solve_level(const std::vector<std::size_t>& idx) {
        if (idx.size() == 1) return single(idx.front());
        std::vector<SymMatrix> sub;
        for (std::size_t i : idx) sub.push_back(family_[i]);
        const SetRank r = matrix_set_rank(sub, rank_tol_);
        if (r.rank > 2) throw NumericalFailure("sub-family rank exceeds 2 during reduction");
        if (r.rank == 0) {
            std::vector<std::pair<std::size_t, double>> e;
            for (std::size_t i : idx) e.emplace_back(i, 1.0);
            return certified(embed(e));
        }
        if (r.rank == 1) return rank_one(idx, idx[r.basis.front()], *r.coordinates);
        if (idx.size() == 2) return pair(idx[0], idx[1]);

        const std::size_t b1 = idx[r.basis[0]];
        const std::size_t b2 = idx[r.basis[1]];
        std::size_t last = idx.size();
        for (std::size_t p = idx.size(); p-- > 0;)
            if (p != r.basis[0] && p != r.basis[1]) {
                last = p;
                break;
            }
        const std::size_t m = idx[last];
        double alpha = 0.0, beta = 0.0;
        try {
            std::tie(alpha, beta) = express_in_basis(family_[m], family_[b1], family_[b2], rank_tol_);
        } catch (const NotInSpan& e) {
            basis_residual_ = std::max(basis_residual_, e.residual());
            throw;
        }
        {
            SymMatrix res = family_[m];
            res.add_scaled(-alpha, family_[b1]).add_scaled(-beta, family_[b2]);
            basis_residual_ = std::max(basis_residual_, res.max_abs());
        }
        const bool a0 = negligible(alpha, b1, m);
        const bool z0 = negligible(beta, b2, m);

        if (a0 && z0) {
            // A_m vanishes: the unit weight on it is already a certificate.
            CertificateReport reduced = solve(without(idx, m));
            if (reduced.certified()) return reduced;
            return certified(embed({{m, 1.0}}));
        }
        if ((a0 || alpha >= 0.0) && (z0 || beta >= 0.0)) return solve(without(idx, m));
        if (alpha < 0.0 && z0) return pair(b1, m);
        if (a0 && beta < 0.0) return pair(b2, m);
        if (alpha < 0.0 && beta > 0.0) return solve(without(idx, b2));
        if (alpha > 0.0 && beta < 0.0) return solve(without(idx, b1));
        // alpha < 0, beta < 0: t_b1 A_b1 + t_b2 A_b2 + t_m A_m = 0.
        const double denom = 1.0 - alpha - beta;
        return certified(embed({{b1, -alpha / denom}, {b2, -beta / denom}, {m, 1.0 / denom}}));
    }

    std::span<const SymMatrix> family_;
    const FirstOrderCone& cone_;
    Matrix basis_;
    double rank_tol_;
    double thr_;
    int depth_ = 0;
    int max_depth_ = 0;
    double basis_residual_ = 0.0;
    double bracket_ = 0.0;
};

}  // namespace

CertificateReport yuan_two(const SymMatrix& a, const SymMatrix& b, const FirstOrderCone& k) {
    const std::vector<SymMatrix> family{a, b};
    check_family(family, k);
    const Matrix basis = span_basis(k);
    const double thr = kCertTol * family_scale(family);
    const PairOutcome p = solve_pair(a, b, k, basis, thr);
    CertificateReport report;
    report.residuals["golden_bracket"] = p.bracket;
    report.residuals["span_dim"] = static_cast<double>(basis.cols());
    if (p.certified) {
        SimplexWeights w = SimplexWeights::normalized({p.t, 1.0 - p.t});
        const double lm = restricted_lambda_min(family, w, basis);
        report.outcome = Certified{std::move(w), lm};
        return report;
    }
    if (!refutation_holds(family, k, p.witness))
        throw NumericalFailure("two-matrix witness failed verification");
    report.outcome = Refuted{p.witness, form_values(family, p.witness)};
    return report;
}

CertificateReport certify_rank2(std::span<const SymMatrix> family, const FirstOrderCone& k, double rank_tol) {
    check_family(family, k);
    const SetRank rank = matrix_set_rank(family, rank_tol);
    CertificateReport report;
    if (rank.rank > 2) {
        report.outcome = HypothesisViolation{"matrix set rank is " + std::to_string(rank.rank) + " (must be at most 2)"};
        report.residuals["set_rank"] = rank.rank;
        return report;
    }
    Rank2Solver solver(family, k, rank_tol);
    std::vector<std::size_t> all(family.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    report = solver.solve(all);
    report.residuals["set_rank"] = rank.rank;
    report.residuals["span_dim"] = static_cast<double>(k.span_dim());
    report.residuals["recursion_depth"] = solver.max_depth();
    report.residuals["basis_residual"] = solver.basis_residual();
    report.residuals["golden_bracket"] = solver.bracket();

    const double thr = kCertTol * family_scale(family);
    if (const Certified* c = report.certified()) {
        if (c->lambda_min >= -thr) return report;
    } else if (const Refuted* r = report.refuted()) {
        if (refutation_holds(family, k, r->witness)) return report;
    }
    // The reduction's answer did not survive re-verification on the full family. A unit
    // weight can still certify when the offending member is negligible at this scale.
    const Matrix basis = span_basis(k);
    for (std::size_t i = 0; i < family.size(); ++i) {
        SimplexWeights w = SimplexWeights::unit(family.size(), i);
        const double lm = restricted_lambda_min(family, w, basis);
        if (lm >= -thr) {
            report.outcome = Certified{std::move(w), lm};
            return report;
        }
    }
    throw NumericalFailure("rank-2 reduction produced an answer that fails verification on the full family");
}

}  // namespace yuancert
