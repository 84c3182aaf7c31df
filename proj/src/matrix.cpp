#include "yuancert/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "yuancert/errors.hpp"

namespace yuancert {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw InputError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_columns(std::size_t rows, std::span<const Vector> columns) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
    if (values.size() != rows_) throw InputError("column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InputError("matrix product dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw InputError("matrix-vector dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix difference dimension mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

SymMatrix::SymMatrix(std::size_t n) : m_(n, n) {
    if (n == 0) throw InputError("symmetric matrix order must be at least 1");
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    *this = from_dense(Matrix(rows));
}

SymMatrix SymMatrix::identity(std::size_t n) {
    SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix s(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
    return s;
}

SymMatrix SymMatrix::from_upper(const Matrix& m) {
    if (!m.is_square()) throw InputError("symmetric matrix must be square");
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) s.set(i, j, m(i, j));
    return s;
}

SymMatrix SymMatrix::from_dense(const Matrix& m, double asym_tol) {
    if (!m.is_square()) throw InputError("symmetric matrix must be square");
    SymMatrix s(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > asym_tol)
                throw InputError("matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
        }
    return s;
}

namespace {
void require_same_order(const SymMatrix& a, const SymMatrix& b) {
    if (a.order() != b.order()) throw InputError("symmetric matrix order mismatch");
}
}  // namespace

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) { return add_scaled(1.0, o); }
SymMatrix& SymMatrix::operator-=(const SymMatrix& o) { return add_scaled(-1.0, o); }

SymMatrix& SymMatrix::operator*=(double s) {
    const std::size_t n = order();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) set(i, j, s * m_(i, j));
    return *this;
}

SymMatrix& SymMatrix::add_scaled(double s, const SymMatrix& o) {
    require_same_order(*this, o);
    const std::size_t n = order();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) set(i, j, m_(i, j) + s * o(i, j));
    return *this;
}

SymMatrix block_diag(const SymMatrix& a, std::size_t extra_zero_rows) {
    SymMatrix out(a.order() + extra_zero_rows);
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = i; j < a.order(); ++j) out.set(i, j, a(i, j));
    return out;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
    require_same_order(a, b);
    return max_abs_diff(a.dense(), b.dense());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("matrix shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InputError("dot product length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw InputError("axpy length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

Vector scaled(double s, std::span<const double> x) {
    Vector y(x.begin(), x.end());
    for (double& v : y) v *= s;
    return y;
}

namespace {
// Two passes of projection are enough to restore orthogonality to working precision.
void project_out(std::span<const Vector> basis, Vector& v) {
    for (int pass = 0; pass < 2; ++pass)
        for (const Vector& q : basis) axpy(-dot(q, v), q, v);
}
}  // namespace

std::vector<Vector> orthonormalize(std::span<const Vector> vectors, double tol) {
    double largest = 0.0;
    for (const Vector& v : vectors) largest = std::max(largest, norm2(v));
    std::vector<Vector> out;
    if (largest == 0.0) return out;
    for (const Vector& v : vectors) {
        Vector r = v;
        project_out(out, r);
        const double nr = norm2(r);
        if (nr <= tol * largest) continue;
        for (double& x : r) x /= nr;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Vector> orthonormal_complement(std::span<const Vector> basis, std::size_t n) {
    std::vector<Vector> all(basis.begin(), basis.end());
    const std::size_t start = all.size();
    std::vector<bool> used(n, false);
    // Greedy over coordinate vectors: always take the one with the largest residual.
    while (all.size() < n) {
        double best = -1.0;
        std::size_t best_j = n;
        Vector best_r;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            Vector e(n, 0.0);
            e[j] = 1.0;
            project_out(all, e);
            const double ne = norm2(e);
            if (ne > best) {
                best = ne;
                best_j = j;
                best_r = std::move(e);
            }
        }
        if (best_j == n || best <= 1e-8) break;
        used[best_j] = true;
        for (double& x : best_r) x /= best;
        project_out(all, best_r);
        const double again = norm2(best_r);
        for (double& x : best_r) x /= again;
        all.push_back(std::move(best_r));
    }
    return {all.begin() + static_cast<std::ptrdiff_t>(start), all.end()};
}

}  // namespace yuancert
