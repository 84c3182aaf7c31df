#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "yuancert/cone.hpp"
#include "yuancert/errors.hpp"
#include "yuancert/numeric_core.hpp"

using namespace yuancert;

TEST_CASE("span_basis") {
    const Matrix full = span_basis(FirstOrderCone::whole_space(2));
    CHECK(max_abs_diff(full, Matrix::identity(2)) <= 1e-15);

    const FirstOrderCone ray = FirstOrderCone::make(2, {}, Vector{3, 0});
    const Matrix b = span_basis(ray);
    REQUIRE(b.cols() == 1);
    CHECK(b(0, 0) == doctest::Approx(1.0));
    CHECK(b(1, 0) == doctest::Approx(0.0));

    // span(e1) + ray((e1 + e2)/sqrt 2): the ray keeps only its e2 component.
    const std::vector<Vector> sub{{1, 0, 0}};
    const FirstOrderCone k = FirstOrderCone::make(3, sub, Vector{1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0});
    const Matrix kb = span_basis(k);
    REQUIRE(kb.cols() == 2);
    CHECK(std::abs(kb(2, 0)) <= 1e-15);
    CHECK(std::abs(kb(2, 1)) <= 1e-15);
    CHECK(k.ray()->at(1) == doctest::Approx(1.0));
}

TEST_CASE("a ray inside the subspace is absorbed") {
    const std::vector<Vector> sub{{1, 0}};
    const FirstOrderCone k = FirstOrderCone::make(2, sub, Vector{2, 1e-10});
    CHECK_FALSE(k.ray().has_value());
    CHECK(k.span_dim() == 1);
}

TEST_CASE("restrict") {
    const SymMatrix m{{2, 1}, {1, 3}};
    CHECK(max_abs_diff(restrict(m, Matrix::identity(2)), m) <= 1e-15);

    const SymMatrix block{{1, -1, 0}, {-1, 1, 0}, {0, 0, 0}};
    Matrix b(3, 2);
    b(0, 0) = 1;
    b(1, 1) = 1;
    CHECK(max_abs_diff(restrict(block, b), SymMatrix{{1, -1}, {-1, 1}}) <= 1e-15);

    Matrix e2(2, 1);
    e2(1, 0) = 1;
    const SymMatrix r = restrict(SymMatrix{{-1, 0}, {0, 1}}, e2);
    REQUIRE(r.order() == 1);
    CHECK(r(0, 0) == 1.0);

    CHECK_THROWS_AS(restrict(m, Matrix::identity(3)), InputError);
}

TEST_CASE("cone_contains") {
    CHECK(cone_contains(FirstOrderCone::whole_space(3), Vector{-4, 2, 9}));
    const FirstOrderCone ray = FirstOrderCone::make(2, {}, Vector{1, 0});
    CHECK_FALSE(cone_contains(ray, Vector{-1, 0}));
    const std::vector<Vector> sub{{1, 0}};
    const FirstOrderCone k = FirstOrderCone::make(2, sub, Vector{0, 1});
    CHECK(cone_contains(k, Vector{5, 3}));
    CHECK_FALSE(cone_contains(k, Vector{5, -3}));
}

TEST_CASE("property: cone invariants") {
    gen::Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
        const FirstOrderCone k = gen::cone(rng, n);
        for (std::size_t i = 0; i < k.subspace().size(); ++i)
            for (std::size_t j = 0; j < k.subspace().size(); ++j)
                CHECK(std::abs(dot(k.subspace()[i], k.subspace()[j]) - (i == j ? 1.0 : 0.0)) <= 1e-10);
        if (k.ray()) {
            CHECK(std::abs(norm2(*k.ray()) - 1.0) <= 1e-10);
            for (const Vector& v : k.subspace()) CHECK(std::abs(dot(v, *k.ray())) <= 1e-10);
        }
        for (int s = 0; s < 10; ++s) CHECK(cone_contains(k, gen::point_in_cone(rng, k)));
    }
}

// Even forms: PSD on K matches PSD of the restriction to span(K).
TEST_CASE("property: span reduction") {
    gen::Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 6));
        const FirstOrderCone k = gen::cone(rng, n, 1.0);
        const Matrix b = span_basis(k);
        const std::size_t d = b.cols();
        // m = B R B^T + (I - BB^T) S (I - BB^T), so restrict(m, B) = R with a chosen spectrum.
        const bool want_psd = rng.coin();
        Vector lam(d);
        for (double& l : lam) l = rng.uniform(want_psd ? 0.05 : 0.0, 1.0);
        if (!want_psd) lam[0] = -1.0;
        std::vector<Vector> cols;
        for (std::size_t i = 0; i < d; ++i) cols.push_back(gen::vector(rng, d));
        const auto u = orthonormalize(cols);
        if (u.size() != d) continue;
        const Matrix q = b * Matrix::from_columns(d, u);
        Matrix proj = Matrix::identity(n) - b * b.transpose();
        const Matrix s = gen::sym(rng, n).dense();
        const Matrix outside = proj * s * proj;
        SymMatrix m(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                double v = outside(i, j);
                for (std::size_t c = 0; c < d; ++c) v += q(i, c) * lam[c] * q(j, c);
                m.set(i, j, v);
            }
        const bool restricted_psd = is_psd(restrict(m, b)).psd();
        CHECK(restricted_psd == want_psd);
        double sampled_min = 1e300;
        for (int t = 0; t < 1000; ++t) sampled_min = std::min(sampled_min, quad_form(m, gen::point_in_cone(rng, k)));
        CHECK(restricted_psd == (sampled_min >= -1e-12));
    }
}

// Max-of-forms nonnegativity on K versus on span(K), both by sampling.
TEST_CASE("property: max-form verdict is the same on K and on span(K)") {
    gen::Rng rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 4));
        const FirstOrderCone k = gen::cone(rng, n, 1.0);
        const Matrix b = span_basis(k);
        const std::vector<SymMatrix> fam{gen::sym(rng, n), gen::sym(rng, n)};
        const auto maxform = [&](const Vector& x) {
            return std::max(quad_form(fam[0], x), quad_form(fam[1], x));
        };
        for (int t = 0; t < 200; ++t) {
            const Vector y = gen::unit_vector(rng, b.cols());
            const Vector in_span = b * y;
            const Vector in_cone = lift_into_cone(k, b, y);
            CHECK(cone_contains(k, in_cone));
            CHECK(std::abs(maxform(in_span) - maxform(in_cone)) <= 1e-12 * (1.0 + std::abs(maxform(in_span))));
        }
    }
}

TEST_CASE("property: restriction verdict ignores the choice of orthonormal basis") {
    gen::Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 5));
        const FirstOrderCone k = gen::cone(rng, n);
        const Matrix b = span_basis(k);
        const std::size_t d = b.cols();
        // Rotate the basis by a random orthogonal d x d matrix.
        std::vector<Vector> cols;
        for (std::size_t i = 0; i < d; ++i) cols.push_back(gen::vector(rng, d));
        const auto q = orthonormalize(cols);
        if (q.size() != d) continue;
        const Matrix rotated = b * Matrix::from_columns(d, q);
        const SymMatrix m = gen::sym(rng, n);
        const double l1 = min_eigenvalue(restrict(m, b));
        const double l2 = min_eigenvalue(restrict(m, rotated));
        CHECK(std::abs(l1 - l2) <= 1e-10 * (1.0 + m.max_abs()));
    }
}
