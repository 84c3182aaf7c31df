#include "yuancert/numeric_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "yuancert/errors.hpp"

namespace yuancert {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;

double max_off_diagonal(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
}

// Cyclic Jacobi on a full working copy. When `vectors` is non-null it accumulates
// the rotations so that on exit A = V diag(a) V^T.
void jacobi_diagonalize(Matrix& a, Matrix* vectors) {
    const std::size_t n = a.rows();
    const double threshold = kOffDiagonalTol * a.max_abs();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (max_off_diagonal(a) <= threshold) return;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (vectors != nullptr) {
                    Matrix& v = *vectors;
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if (max_off_diagonal(a) > threshold)
        throw NumericalFailure("Jacobi eigensolver did not converge within " + std::to_string(kMaxSweeps) +
                               " sweeps");
}

void require_finite(const SymMatrix& m) {
    if (!m.all_finite()) throw InputError("matrix has non-finite entries");
}

std::vector<std::size_t> ascending_order(const Matrix& diag) {
    std::vector<std::size_t> idx(diag.rows());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return diag(i, i) < diag(j, j); });
    return idx;
}

struct PivotedBasis {
    int rank = 0;
    std::vector<std::size_t> pivots;
};

// Column-pivoted modified Gram-Schmidt over a set of vectors.
PivotedBasis pivoted_rank(std::vector<Vector> residual, double tol) {
    PivotedBasis out;
    double largest = 0.0;
    for (const Vector& v : residual) largest = std::max(largest, norm2(v));
    if (largest == 0.0) return out;
    const double threshold = tol * largest;
    std::vector<bool> taken(residual.size(), false);
    while (true) {
        double best = -1.0;
        std::size_t pick = residual.size();
        for (std::size_t i = 0; i < residual.size(); ++i) {
            if (taken[i]) continue;
            const double nr = norm2(residual[i]);
            if (nr > best) {
                best = nr;
                pick = i;
            }
        }
        if (pick == residual.size() || best <= threshold) break;
        taken[pick] = true;
        out.pivots.push_back(pick);
        ++out.rank;
        Vector q = scaled(1.0 / best, residual[pick]);
        for (std::size_t i = 0; i < residual.size(); ++i) {
            if (taken[i]) continue;
            for (int pass = 0; pass < 2; ++pass) axpy(-dot(q, residual[i]), q, residual[i]);
        }
    }
    return out;
}

// First members (in family order) whose residual against the earlier picks exceeds the threshold.
std::vector<std::size_t> greedy_basis(const std::vector<Vector>& flat, double tol, std::size_t limit) {
    double largest = 0.0;
    for (const Vector& v : flat) largest = std::max(largest, norm2(v));
    std::vector<std::size_t> picks;
    std::vector<Vector> q;
    if (largest == 0.0) return picks;
    for (std::size_t i = 0; i < flat.size() && picks.size() < limit; ++i) {
        Vector r = flat[i];
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& qq : q) axpy(-dot(qq, r), qq, r);
        const double nr = norm2(r);
        if (nr <= tol * largest) continue;
        q.push_back(scaled(1.0 / nr, r));
        picks.push_back(i);
    }
    return picks;
}

// Least-squares coordinates of v in span(b1) or span(b1, b2).
std::pair<double, double> least_squares_coords(const Vector& v, const Vector& b1, const Vector* b2) {
    const double n1 = norm2(b1);
    const Vector q1 = scaled(1.0 / n1, b1);
    if (b2 == nullptr) return {dot(q1, v) / n1, 0.0};
    const double r12 = dot(q1, *b2);
    Vector w = *b2;
    axpy(-r12, q1, w);
    axpy(-dot(q1, w), q1, w);
    const double r22 = norm2(w);
    const Vector q2 = scaled(1.0 / r22, w);
    const double c1 = dot(q1, v);
    const double c2 = dot(q2, v);
    // [b1 b2] = [q1 q2] [[n1, r12], [0, r22]]
    const double beta = c2 / r22;
    const double alpha = (c1 - r12 * beta) / n1;
    return {alpha, beta};
}

SetRank rank_of_flattened(const std::vector<Vector>& flat, double tol) {
    SetRank out;
    const PivotedBasis piv = pivoted_rank(flat, tol);
    out.rank = piv.rank;
    if (out.rank > 2) return out;
    const std::size_t want = static_cast<std::size_t>(out.rank);
    out.basis = greedy_basis(flat, tol, want);
    if (out.basis.size() != want) {
        out.basis = piv.pivots;
        std::sort(out.basis.begin(), out.basis.end());
    }
    std::vector<std::pair<double, double>> coords(flat.size(), {0.0, 0.0});
    if (want >= 1) {
        const Vector& b1 = flat[out.basis[0]];
        const Vector* b2 = want == 2 ? &flat[out.basis[1]] : nullptr;
        for (std::size_t i = 0; i < flat.size(); ++i) coords[i] = least_squares_coords(flat[i], b1, b2);
    }
    out.coordinates = std::move(coords);
    return out;
}

}  // namespace

Spectrum sym_eigen(const SymMatrix& m) {
    require_finite(m);
    const std::size_t n = m.order();
    Matrix a = m.dense();
    Matrix v = Matrix::identity(n);
    jacobi_diagonalize(a, &v);
    const auto idx = ascending_order(a);
    Spectrum s{Vector(n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        s.eigenvalues[j] = a(idx[j], idx[j]);
        for (std::size_t i = 0; i < n; ++i) s.basis(i, j) = v(i, idx[j]);
    }
    return s;
}

Vector sym_eigenvalues(const SymMatrix& m) {
    require_finite(m);
    Matrix a = m.dense();
    jacobi_diagonalize(a, nullptr);
    Vector ev(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

double min_eigenvalue(const SymMatrix& m) { return sym_eigen(m).eigenvalues.front(); }

PsdVerdict is_psd(const SymMatrix& m, double tol) {
    if (!(tol >= 0.0)) throw InputError("PSD tolerance must be nonnegative");
    const Spectrum s = sym_eigen(m);
    PsdVerdict out;
    out.min_eigenvalue = s.eigenvalues.front();
    if (out.min_eigenvalue < -tol * (1.0 + m.max_abs()))
        out.negative = NegativeDirection{s.basis.column(0), out.min_eigenvalue};
    return out;
}

double quad_form(const SymMatrix& m, std::span<const double> x) { return quad_form(m.dense(), x); }

double quad_form(const Matrix& m, std::span<const double> x) {
    if (!m.is_square() || m.rows() != x.size()) throw InputError("quadratic form dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += x[i] * dot(m.row(i), x);
    return s;
}

MatrixFamily::MatrixFamily(std::vector<Matrix> members) : members_(std::move(members)) {
    if (members_.empty()) throw InputError("matrix family must be nonempty");
    order_ = members_.front().rows();
    for (const Matrix& m : members_) {
        if (!m.is_square() || m.rows() != order_) throw InputError("matrix family members must share one square order");
        if (!m.all_finite()) throw InputError("matrix family has non-finite entries");
    }
    if (order_ == 0) throw InputError("matrix order must be at least 1");
}

MatrixFamily::MatrixFamily(std::span<const SymMatrix> members)
    : MatrixFamily([&] {
          std::vector<Matrix> dense;
          dense.reserve(members.size());
          for (const SymMatrix& s : members) dense.push_back(s.dense());
          return dense;
      }()) {}

bool MatrixFamily::all_symmetric() const noexcept {
    for (const Matrix& m : members_)
        for (std::size_t i = 0; i < order_; ++i)
            for (std::size_t j = i + 1; j < order_; ++j)
                if (m(i, j) != m(j, i)) return false;
    return true;
}

Vector flatten_symmetric(const SymMatrix& m) {
    const std::size_t n = m.order();
    Vector v;
    v.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) v.push_back(i == j ? m(i, j) : std::sqrt(2.0) * m(i, j));
    return v;
}

Vector flatten_full(const Matrix& m) { return m.data(); }

SetRank matrix_set_rank(const MatrixFamily& family, double tol) {
    std::vector<Vector> flat;
    flat.reserve(family.size());
    const bool symmetric = family.all_symmetric();
    for (std::size_t i = 0; i < family.size(); ++i)
        flat.push_back(symmetric ? flatten_symmetric(SymMatrix::from_upper(family[i])) : flatten_full(family[i]));
    return rank_of_flattened(flat, tol);
}

SetRank matrix_set_rank(std::span<const SymMatrix> family, double tol) {
    if (family.empty()) throw InputError("matrix family must be nonempty");
    std::vector<Vector> flat;
    flat.reserve(family.size());
    for (const SymMatrix& s : family) {
        if (s.order() != family.front().order()) throw InputError("matrix family members must share one order");
        if (!s.all_finite()) throw InputError("matrix family has non-finite entries");
        flat.push_back(flatten_symmetric(s));
    }
    return rank_of_flattened(flat, tol);
}

int numerical_rank(const Matrix& m, double tol) {
    std::vector<Vector> cols;
    cols.reserve(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
    return pivoted_rank(std::move(cols), tol).rank;
}

std::pair<double, double> express_in_basis(const SymMatrix& a, const SymMatrix& b1, const SymMatrix& b2,
                                           double tol) {
    if (a.order() != b1.order() || a.order() != b2.order()) throw InputError("express_in_basis order mismatch");
    const Vector fa = flatten_symmetric(a);
    const Vector f1 = flatten_symmetric(b1);
    const Vector f2 = flatten_symmetric(b2);
    const double n1 = norm2(f1);
    const double n2 = norm2(f2);
    if (n1 == 0.0 || n2 == 0.0) throw DegenerateBasis("basis pair contains a zero matrix");
    Vector r = f2;
    const Vector q1 = scaled(1.0 / n1, f1);
    for (int pass = 0; pass < 2; ++pass) axpy(-dot(q1, r), q1, r);
    if (norm2(r) <= tol * std::max(n1, n2)) throw DegenerateBasis("basis pair is linearly dependent");

    const auto [alpha, beta] = least_squares_coords(fa, f1, &f2);
    SymMatrix rebuilt = a;
    rebuilt.add_scaled(-alpha, b1).add_scaled(-beta, b2);
    const double residual = rebuilt.max_abs();
    if (residual > tol * (1.0 + a.max_abs())) throw NotInSpan(residual);
    return {alpha, beta};
}

}  // namespace yuancert
