#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace yuancert {

using Vector = std::vector<double>;

/// Dense row-major real matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    static Matrix from_columns(std::size_t rows, std::span<const Vector> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    Vector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    Matrix transpose() const;
    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator-(const Matrix& a, const Matrix& b);

/// Real symmetric matrix. Setting (i,j) also sets (j,i), so symmetry holds exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    /// Zero matrix of order n >= 1.
    explicit SymMatrix(std::size_t n);
    SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SymMatrix identity(std::size_t n);
    static SymMatrix diagonal(std::span<const double> d);
    /// Copies the upper triangle of a square matrix; the lower triangle is ignored.
    static SymMatrix from_upper(const Matrix& m);
    /// Accepts a square matrix whose asymmetry is at most `asym_tol` (absolute), then symmetrizes.
    static SymMatrix from_dense(const Matrix& m, double asym_tol = 1e-12);

    std::size_t order() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    double max_abs() const noexcept { return m_.max_abs(); }
    bool all_finite() const noexcept { return m_.all_finite(); }
    const Matrix& dense() const noexcept { return m_; }

    SymMatrix& operator+=(const SymMatrix& o);
    SymMatrix& operator-=(const SymMatrix& o);
    SymMatrix& operator*=(double s);
    /// this += s * o
    SymMatrix& add_scaled(double s, const SymMatrix& o);

    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

private:
    Matrix m_;
};

SymMatrix block_diag(const SymMatrix& a, std::size_t extra_zero_rows);

/// Entrywise max |a - b|; orders must match.
double max_abs_diff(const SymMatrix& a, const SymMatrix& b);
double max_abs_diff(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs(std::span<const double> a);
/// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y);
Vector scaled(double s, std::span<const double> x);

/// Orthonormalizes the given vectors by modified Gram-Schmidt with reorthogonalization,
/// dropping any whose residual falls below tol * (largest input norm).
std::vector<Vector> orthonormalize(std::span<const Vector> vectors, double tol = 1e-10);

/// Orthonormal basis of the orthogonal complement of span(basis) in R^n.
/// `basis` must already be orthonormal.
std::vector<Vector> orthonormal_complement(std::span<const Vector> basis, std::size_t n);

}  // namespace yuancert
