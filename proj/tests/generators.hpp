#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "yuancert/cone.hpp"
#include "yuancert/matrix.hpp"

namespace gen {

using yuancert::FirstOrderCone;
using yuancert::Matrix;
using yuancert::SymMatrix;
using yuancert::Vector;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double normal() { return std::normal_distribution<double>()(eng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

private:
    std::mt19937_64 eng_;
};

inline Vector vector(Rng& r, std::size_t n) {
    Vector v(n);
    for (double& x : v) x = r.normal();
    return v;
}

inline Vector unit_vector(Rng& r, std::size_t n) {
    Vector v;
    double len = 0.0;
    while (len < 1e-6) {
        v = vector(r, n);
        len = yuancert::norm2(v);
    }
    for (double& x : v) x /= len;
    return v;
}

inline SymMatrix sym(Rng& r, std::size_t n, double scale = 1.0) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, scale * r.normal());
    return m;
}

inline Matrix square(Rng& r, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = r.normal();
    return m;
}

/// m members A_i = alpha_i B1 + beta_i B2. Coefficients are occasionally zero so every sign
/// pattern of the case analysis shows up.
inline std::vector<SymMatrix> rank2_family(Rng& r, std::size_t n, std::size_t m) {
    const SymMatrix b1 = sym(r, n), b2 = sym(r, n);
    const auto coeff = [&] { return r.coin(0.15) ? 0.0 : r.uniform(-1.5, 1.5); };
    std::vector<SymMatrix> out;
    for (std::size_t i = 0; i < m; ++i) {
        double a = coeff(), b = coeff();
        if (a == 0.0 && b == 0.0 && !r.coin(0.2)) a = 1.0;
        SymMatrix s = b1;
        s *= a;
        s.add_scaled(b, b2);
        out.push_back(s);
    }
    return out;
}

/// A cone in R^n: a random subspace of dimension 0..n-1 plus, with probability p, a ray.
inline FirstOrderCone cone(Rng& r, std::size_t n, double ray_probability = 0.5) {
    const int k = r.integer(0, static_cast<int>(n) - 1);
    std::vector<Vector> sub;
    for (int i = 0; i < k; ++i) sub.push_back(vector(r, n));
    std::optional<Vector> ray;
    if (r.coin(ray_probability) || k == 0) ray = vector(r, n);
    return FirstOrderCone::make(n, sub, ray);
}

/// Uniform-ish unit vector of K: a subspace component plus a nonnegative ray component.
inline Vector point_in_cone(Rng& r, const FirstOrderCone& k) {
    Vector x(k.ambient_dim(), 0.0);
    for (const Vector& v : k.subspace()) yuancert::axpy(r.normal(), v, x);
    if (k.ray()) yuancert::axpy(std::abs(r.normal()), *k.ray(), x);
    const double len = yuancert::norm2(x);
    if (len > 0.0)
        for (double& v : x) v /= len;
    return x;
}

}  // namespace gen
