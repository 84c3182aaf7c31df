#include "yuancert/nlp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "yuancert/errors.hpp"
#include "yuancert/lp.hpp"
#include "yuancert/numeric_core.hpp"

namespace yuancert {

namespace {

constexpr double kVertexFeasTol = 1e-9;
constexpr double kVertexDedupTol = 1e-8;
constexpr double kVertexResidualTol = 1e-8;
constexpr double kZeroMultiplierTol = 1e-9;

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw InputError(std::string(what) + " has non-finite entries");
}

// Least squares for a full-column-rank system via modified Gram-Schmidt QR.
// Returns nullopt when the columns are numerically dependent.
std::optional<Vector> solve_full_rank(const std::vector<Vector>& cols, const Vector& rhs) {
    const std::size_t k = cols.size();
    if (k == 0) return Vector{};
    double largest = 0.0;
    for (const Vector& c : cols) largest = std::max(largest, norm2(c));
    if (largest == 0.0) return std::nullopt;
    std::vector<Vector> q;
    Matrix r(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        Vector v = cols[j];
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < q.size(); ++i) {
                const double h = dot(q[i], v);
                r(i, j) += h;
                axpy(-h, q[i], v);
            }
        const double nv = norm2(v);
        if (nv <= 1e-9 * largest) return std::nullopt;
        r(j, j) = nv;
        q.push_back(scaled(1.0 / nv, v));
    }
    Vector y(k);
    for (std::size_t i = 0; i < k; ++i) y[i] = dot(q[i], rhs);
    for (std::size_t i = k; i-- > 0;) {
        for (std::size_t j = i + 1; j < k; ++j) y[i] -= r(i, j) * y[j];
        y[i] /= r(i, i);
    }
    return y;
}

Vector concat(const MultiplierPoint& p) {
    Vector v = p.lambda;
    v.insert(v.end(), p.mu.begin(), p.mu.end());
    return v;
}

double gradient_scale(const KKTData& data) {
    double s = max_abs(data.grad_f);
    for (const Vector& g : data.grad_h) s = std::max(s, max_abs(g));
    for (std::size_t i : data.active) s = std::max(s, max_abs(data.grad_g[i]));
    return 1.0 + s;
}

// Calls visit(subset) for every size-k subset of {0..n-1}, in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> s(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            visit(s);
            return;
        }
        for (std::size_t i = start; i + (k - pos) <= n; ++i) {
            s[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
}

bool multiplier_set_nonempty(const KKTData& data) {
    const std::size_t p1 = data.p1();
    const std::size_t a = data.active.size();
    Matrix aeq(data.n, p1 + a);
    for (std::size_t r = 0; r < data.n; ++r) {
        for (std::size_t i = 0; i < p1; ++i) aeq(r, i) = data.grad_h[i][r];
        for (std::size_t i = 0; i < a; ++i) aeq(r, p1 + i) = data.grad_g[data.active[i]][r];
    }
    std::vector<bool> nonneg(p1 + a, true);
    for (std::size_t i = 0; i < p1; ++i) nonneg[i] = false;
    return lp_solve(Vector(p1 + a, 0.0), aeq, scaled(-1.0, data.grad_f), nonneg).status == LpStatus::Optimal;
}

}  // namespace

void KKTData::validate() const {
    if (n == 0) throw InputError("KKT data: n must be at least 1");
    if (grad_f.size() != n) throw InputError("KKT data: grad_f has wrong length");
    require_finite(grad_f, "grad_f");
    for (const Vector& g : grad_h) {
        if (g.size() != n) throw InputError("KKT data: grad_h entry has wrong length");
        require_finite(g, "grad_h");
    }
    for (const Vector& g : grad_g) {
        if (g.size() != n) throw InputError("KKT data: grad_g entry has wrong length");
        require_finite(g, "grad_g");
    }
    if (hess_f.order() != n || !hess_f.all_finite()) throw InputError("KKT data: hess_f has wrong order or bad entries");
    if (hess_h.size() != grad_h.size()) throw InputError("KKT data: hess_h count differs from grad_h count");
    if (hess_g.size() != grad_g.size()) throw InputError("KKT data: hess_g count differs from grad_g count");
    for (const SymMatrix& h : hess_h)
        if (h.order() != n || !h.all_finite()) throw InputError("KKT data: hess_h entry has wrong order or bad entries");
    for (const SymMatrix& h : hess_g)
        if (h.order() != n || !h.all_finite()) throw InputError("KKT data: hess_g entry has wrong order or bad entries");
    std::set<std::size_t> seen;
    for (std::size_t i : active) {
        if (i >= p2()) throw InputError("KKT data: active index " + std::to_string(i) + " out of range");
        if (!seen.insert(i).second) throw InputError("KKT data: duplicate active index " + std::to_string(i));
    }
    if (g_values) {
        if (g_values->size() != p2()) throw InputError("KKT data: g_values has wrong length");
        require_finite(*g_values, "g_values");
        for (std::size_t i = 0; i < p2(); ++i) {
            const bool is_active = std::abs((*g_values)[i]) <= kActivityTol;
            if (is_active != seen.contains(i))
                throw InputError("KKT data: active set disagrees with g_values at index " + std::to_string(i));
        }
    }
}

KKTData KKTData::with_active_from_values(double tol) const {
    if (!g_values) throw InputError("KKT data: g_values required to derive the active set");
    KKTData out = *this;
    out.active.clear();
    for (std::size_t i = 0; i < g_values->size(); ++i)
        if (std::abs((*g_values)[i]) <= tol) out.active.push_back(i);
    return out;
}

SymMatrix lagrangian_hessian(const KKTData& data, const MultiplierPoint& pt) {
    if (pt.lambda.size() != data.p1() || pt.mu.size() != data.p2())
        throw InputError("multiplier dimensions do not match the KKT data");
    SymMatrix h = data.hess_f;
    for (std::size_t i = 0; i < data.p1(); ++i)
        if (pt.lambda[i] != 0.0) h.add_scaled(pt.lambda[i], data.hess_h[i]);
    for (std::size_t i = 0; i < data.p2(); ++i)
        if (pt.mu[i] != 0.0) h.add_scaled(pt.mu[i], data.hess_g[i]);
    return h;
}

Vector lagrangian_gradient(const KKTData& data, const MultiplierPoint& pt) {
    if (pt.lambda.size() != data.p1() || pt.mu.size() != data.p2())
        throw InputError("multiplier dimensions do not match the KKT data");
    Vector g = data.grad_f;
    for (std::size_t i = 0; i < data.p1(); ++i) axpy(pt.lambda[i], data.grad_h[i], g);
    for (std::size_t i = 0; i < data.p2(); ++i) axpy(pt.mu[i], data.grad_g[i], g);
    return g;
}

bool check_mfcq(const KKTData& data) {
    data.validate();
    const std::size_t p1 = data.p1();
    const std::size_t a = data.active.size();
    if (p1 > 0) {
        if (numerical_rank(Matrix::from_columns(data.n, data.grad_h)) < static_cast<int>(p1)) return false;
    }
    if (a == 0) return true;
    // max sum(beta)  s.t.  sum alpha_i grad_h_i + sum beta_i grad_g_i = 0,  sum beta + s = 1,  beta, s >= 0
    const std::size_t nv = p1 + a + 1;
    Matrix aeq(data.n + 1, nv);
    for (std::size_t r = 0; r < data.n; ++r) {
        for (std::size_t i = 0; i < p1; ++i) aeq(r, i) = data.grad_h[i][r];
        for (std::size_t i = 0; i < a; ++i) aeq(r, p1 + i) = data.grad_g[data.active[i]][r];
    }
    for (std::size_t i = 0; i < a + 1; ++i) aeq(data.n, p1 + i) = 1.0;
    Vector b(data.n + 1, 0.0);
    b[data.n] = 1.0;
    Vector c(nv, 0.0);
    for (std::size_t i = 0; i < a; ++i) c[p1 + i] = 1.0;
    std::vector<bool> nonneg(nv, true);
    for (std::size_t i = 0; i < p1; ++i) nonneg[i] = false;
    const LpResult lp = lp_solve(c, aeq, b, nonneg);
    if (lp.status != LpStatus::Optimal) throw NumericalFailure("MFCQ linear program did not reach an optimum");
    return lp.optimum <= 1e-9;
}

std::vector<MultiplierPoint> multiplier_vertices(const KKTData& data) {
    data.validate();
    if (!multiplier_set_nonempty(data)) throw EmptyMultiplierSet("no multiplier satisfies grad L = 0 with mu >= 0");
    if (!check_mfcq(data)) throw UnboundedDetected("multiplier set is unbounded (MFCQ fails)");

    const std::size_t p1 = data.p1();
    const std::size_t a = data.active.size();
    std::vector<Vector> all_cols(data.grad_h.begin(), data.grad_h.end());
    for (std::size_t i : data.active) all_cols.push_back(data.grad_g[i]);
    const int r = all_cols.empty() ? 0 : numerical_rank(Matrix::from_columns(data.n, all_cols));
    if (r < static_cast<int>(p1)) throw UnboundedDetected("equality gradients are dependent");

    const Vector rhs = scaled(-1.0, data.grad_f);
    const double res_tol = kVertexResidualTol * gradient_scale(data);
    std::vector<MultiplierPoint> found;
    for_each_subset(a, static_cast<std::size_t>(r) - p1, [&](const std::vector<std::size_t>& subset) {
        std::vector<Vector> cols(data.grad_h.begin(), data.grad_h.end());
        for (std::size_t s : subset) cols.push_back(data.grad_g[data.active[s]]);
        const auto y = solve_full_rank(cols, rhs);
        if (!y) return;
        MultiplierPoint pt{Vector(y->begin(), y->begin() + static_cast<std::ptrdiff_t>(p1)), Vector(data.p2(), 0.0)};
        for (std::size_t j = 0; j < subset.size(); ++j) {
            const double mu = (*y)[p1 + j];
            if (mu < -kVertexFeasTol) return;
            pt.mu[data.active[subset[j]]] = std::max(mu, 0.0);
        }
        if (max_abs(lagrangian_gradient(data, pt)) > res_tol) return;
        found.push_back(std::move(pt));
    });
    if (found.empty()) throw EmptyMultiplierSet("no basic feasible multiplier found");

    std::sort(found.begin(), found.end(),
              [](const MultiplierPoint& x, const MultiplierPoint& y) { return concat(x) < concat(y); });
    std::vector<MultiplierPoint> unique;
    for (MultiplierPoint& p : found) {
        const Vector cp = concat(p);
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const MultiplierPoint& u) {
            const Vector cu = concat(u);
            double d = 0.0;
            for (std::size_t i = 0; i < cp.size(); ++i) d = std::max(d, std::abs(cp[i] - cu[i]));
            return d <= kVertexDedupTol;
        });
        if (!dup) unique.push_back(std::move(p));
    }
    return unique;
}

std::vector<Vector> critical_cone_lineality(const KKTData& data) {
    data.validate();
    std::vector<Vector> rows(data.grad_h.begin(), data.grad_h.end());
    for (std::size_t i : data.active) rows.push_back(data.grad_g[i]);
    rows.push_back(data.grad_f);
    const std::vector<Vector> row_space = orthonormalize(rows, 1e-9);
    return orthonormal_complement(row_space, data.n);
}

GscResult check_gsc(const KKTData& data) { return check_gsc(data, multiplier_vertices(data)); }

GscResult check_gsc(const KKTData& data, const std::vector<MultiplierPoint>& vertices) {
    GscResult out;
    for (std::size_t i : data.active) {
        const bool always_zero = std::all_of(vertices.begin(), vertices.end(),
                                             [&](const MultiplierPoint& v) { return v.mu[i] <= kZeroMultiplierTol; });
        if (always_zero) out.always_zero.push_back(i);
    }
    std::sort(out.always_zero.begin(), out.always_zero.end());
    out.holds = out.always_zero.size() <= 1;
    return out;
}

void require_critical(const KKTData& data, const FirstOrderCone& k, double tol) {
    if (k.ambient_dim() != data.n) throw InputError("cone dimension differs from the problem dimension");
    const auto check = [&](const Vector& d, bool is_ray) {
        const auto bound = [&](const Vector& g) { return tol * (1.0 + norm2(g)); };
        for (const Vector& g : data.grad_h)
            if (std::abs(dot(g, d)) > bound(g)) throw ConeNotCritical("cone direction violates an equality gradient");
        if (std::abs(dot(data.grad_f, d)) > bound(data.grad_f))
            throw ConeNotCritical("cone direction is not orthogonal to grad f");
        for (std::size_t i : data.active) {
            const double v = dot(data.grad_g[i], d);
            if (is_ray ? v > bound(data.grad_g[i]) : std::abs(v) > bound(data.grad_g[i]))
                throw ConeNotCritical("cone direction violates active inequality " + std::to_string(i));
        }
    };
    for (const Vector& v : k.subspace()) check(v, false);
    if (k.ray()) check(*k.ray(), true);
}

SecondOrderResult second_order_certificate(const KKTData& data, std::optional<FirstOrderCone> k) {
    data.validate();
    if (!check_mfcq(data)) throw MfcqFailed("Mangasarian-Fromovitz constraint qualification does not hold");
    SecondOrderResult out;
    out.vertices = multiplier_vertices(data);
    if (k) {
        require_critical(data, *k);
        out.cone = *k;
    } else {
        out.cone = FirstOrderCone::make(data.n, critical_cone_lineality(data));
    }

    std::vector<SymMatrix> hessians;
    hessians.reserve(out.vertices.size());
    for (const MultiplierPoint& v : out.vertices) hessians.push_back(lagrangian_hessian(data, v));
    out.report = certify_rank2(hessians, out.cone);
    out.report.residuals["vertex_count"] = static_cast<double>(out.vertices.size());

    if (const Certified* c = out.report.certified()) {
        MultiplierPoint mult{Vector(data.p1(), 0.0), Vector(data.p2(), 0.0)};
        for (std::size_t i = 0; i < out.vertices.size(); ++i) {
            axpy(c->weights[i], out.vertices[i].lambda, mult.lambda);
            axpy(c->weights[i], out.vertices[i].mu, mult.mu);
        }
        const Matrix basis = span_basis(out.cone);
        const double lm =
            basis.cols() == 0 ? 0.0 : min_eigenvalue(restrict(lagrangian_hessian(data, mult), basis));
        if (lm < -kCertTol * family_scale(hessians))
            throw NumericalFailure("recombined multiplier fails the restricted PSD check");
        out.report.residuals["multiplier_lambda_min"] = lm;
        out.report.residuals["stationarity"] = max_abs(lagrangian_gradient(data, mult));
        out.multiplier = std::move(mult);
    }
    return out;
}

}  // namespace yuancert
