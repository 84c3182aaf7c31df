#include "yuancert/cone.hpp"

#include <cmath>

#include "yuancert/errors.hpp"

namespace yuancert {

FirstOrderCone FirstOrderCone::whole_space(std::size_t n) {
    std::vector<Vector> e;
    for (std::size_t i = 0; i < n; ++i) {
        Vector v(n, 0.0);
        v[i] = 1.0;
        e.push_back(std::move(v));
    }
    return make(n, e);
}

FirstOrderCone FirstOrderCone::make(std::size_t n, std::span<const Vector> subspace_vectors,
                                    std::optional<Vector> ray) {
    if (n == 0) throw InputError("cone ambient dimension must be at least 1");
    for (const Vector& v : subspace_vectors) {
        if (v.size() != n) throw InputError("cone subspace vector has wrong dimension");
        for (double x : v)
            if (!std::isfinite(x)) throw InputError("cone subspace vector has non-finite entries");
    }
    FirstOrderCone k;
    k.n_ = n;
    k.subspace_ = orthonormalize(subspace_vectors);
    if (ray) {
        if (ray->size() != n) throw InputError("cone ray has wrong dimension");
        const double len = norm2(*ray);
        if (!std::isfinite(len)) throw InputError("cone ray has non-finite entries");
        if (len > 0.0) {
            Vector d = scaled(1.0 / len, *ray);
            for (int pass = 0; pass < 2; ++pass)
                for (const Vector& q : k.subspace_) axpy(-dot(q, d), q, d);
            const double orth = norm2(d);
            if (orth >= kRayAbsorbTol) k.ray_ = scaled(1.0 / orth, d);
        }
    }
    return k;
}

Matrix span_basis(const FirstOrderCone& k) {
    std::vector<Vector> cols = k.subspace();
    if (k.ray()) cols.push_back(*k.ray());
    return Matrix::from_columns(k.ambient_dim(), cols);
}

SymMatrix restrict(const SymMatrix& m, const Matrix& basis) {
    if (basis.rows() != m.order()) throw InputError("restriction basis has wrong row count");
    if (basis.cols() == 0) throw InputError("restriction to the zero subspace");
    const Matrix mb = m.dense() * basis;
    const std::size_t k = basis.cols();
    SymMatrix out(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < basis.rows(); ++r) s += basis(r, i) * mb(r, j);
            out.set(i, j, s);
        }
    return out;
}

bool cone_contains(const FirstOrderCone& k, std::span<const double> x, double tol) {
    if (x.size() != k.ambient_dim()) throw InputError("cone membership dimension mismatch");
    Vector r(x.begin(), x.end());
    for (const Vector& q : k.subspace()) axpy(-dot(q, x), q, r);
    if (k.ray()) {
        const double s = dot(*k.ray(), x);
        axpy(-s, *k.ray(), r);
        if (s < -tol) return false;
    }
    return norm2(r) <= tol;
}

Vector lift_into_cone(const FirstOrderCone& k, const Matrix& basis, std::span<const double> y) {
    Vector x = basis * y;
    if (k.ray() && y.back() < 0.0)
        for (double& v : x) v = -v;
    return x;
}

}  // namespace yuancert
