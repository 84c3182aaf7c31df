#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "yuancert/errors.hpp"
#include "yuancert/quadprob.hpp"

using namespace yuancert;

namespace {

std::vector<Matrix> dense(const std::vector<SymMatrix>& f) {
    std::vector<Matrix> out;
    for (const auto& a : f) out.push_back(a.dense());
    return out;
}

double max_form(const std::vector<SymMatrix>& f, const Vector& x) {
    double m = -1e300;
    for (const auto& a : f) m = std::max(m, quad_form(a, x));
    return m;
}

}  // namespace

TEST_CASE("jacobian_at") {
    const QuadProblem ex1{fx::example1(), -1.0};
    const Matrix j0 = jacobian_at(ex1, Vector{0, 0});
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(j0(0, c) == 0.0);
        CHECK(j0(2, c) == -1.0);
    }
    CHECK(numerical_rank(j0) == 1);

    const Matrix jc = jacobian_at(fx::nonsymmetric_triple(), 1.0, Vector{1, 2});
    CHECK(max_abs_diff(jc, Matrix{{1, 1, 1}, {0, 2, 1}, {1, 1, 1}}) == 0.0);
    CHECK(numerical_rank(jc) == 2);

    const QuadProblem single{{SymMatrix{{1, 1}, {1, 1}}}, -1.0};
    CHECK(numerical_rank(jacobian_at(single, Vector{1, -1})) == 1);

    CHECK_THROWS_AS(jacobian_at(ex1, Vector{1, 2, 3}), InputError);
}

TEST_CASE("rank_increase_check") {
    const RankIncreaseReport r1 = rank_increase_check(QuadProblem{fx::example1(), -1.0});
    CHECK(r1.rank_at_zero == 1);
    CHECK(r1.max_rank_observed == 2);
    CHECK(r1.satisfied);

    const RankIncreaseReport rc = rank_increase_check(fx::nonsymmetric_triple(), 1.0);
    CHECK(rc.satisfied);
    CHECK(rc.max_rank_observed == 2);
    CHECK(matrix_set_rank(MatrixFamily(fx::nonsymmetric_triple())).rank == 3);

    const RankIncreaseReport r3 = rank_increase_check(QuadProblem{fx::rank3_triple(), -1.0});
    CHECK_FALSE(r3.satisfied);
    CHECK(r3.max_rank_observed == 3);
    CHECK(numerical_rank(jacobian_at(QuadProblem{fx::rank3_triple(), -1.0}, Vector{1, 1})) == 3);

    CHECK_THROWS_AS(rank_increase_check(QuadProblem{fx::example1(), -1.0}, 0), InputError);
}

TEST_CASE("extract_dependence") {
    gen::Rng rng(51);
    const SymMatrix a = gen::sym(rng, 3), b = gen::sym(rng, 3);
    SymMatrix c = a;
    c.add_scaled(2.0, b);
    c *= 1.0 / 3.0;
    const DependenceResult r = extract_dependence(a, b, c);
    REQUIRE(std::holds_alternative<DependenceDelta>(r));
    CHECK(std::get<DependenceDelta>(r).delta == doctest::Approx(2.0).epsilon(1e-10));

    CHECK(std::holds_alternative<DependenceEqual>(extract_dependence(a, b, b)));

    const DependenceResult nd = extract_dependence(SymMatrix{{1, 0}, {0, 0}}, SymMatrix{{0, 0}, {0, 1}}, SymMatrix(2));
    REQUIRE(std::holds_alternative<NotDependent>(nd));
    CHECK(std::get<NotDependent>(nd).residual >= 1.0);

    CHECK_THROWS_AS(extract_dependence(a, b, SymMatrix(2)), InputError);
}

TEST_CASE("dependent_third rejects delta near -1") {
    CHECK_THROWS_AS(dependent_third(SymMatrix::identity(2), SymMatrix(2), -1.0), DegenerateDelta);
    CHECK_NOTHROW(dependent_third(SymMatrix::identity(2), SymMatrix(2), -0.99));
}

TEST_CASE("reduce_family_rank") {
    const auto e2 = fx::example2();
    const FamilyRankResult r2 = reduce_family_rank(QuadProblem{e2, -1.0});
    REQUIRE(std::holds_alternative<FamilyRankReduced>(r2));
    const auto& red = std::get<FamilyRankReduced>(r2);
    CHECK(red.rank.rank == 2);
    CHECK(red.rank.basis == std::vector<std::size_t>{0, 1});
    CHECK((*red.rank.coordinates)[2].first == doctest::Approx(-1.0));
    CHECK((*red.rank.coordinates)[2].second == doctest::Approx(-1.0));
    // A3 = -A1 - A2 is not an affine combination, so the Jacobian reaches rank 3 (det 2.85 at (0.3, 0.7)).
    CHECK_FALSE(red.jacobian_rank_bounded);
    REQUIRE(red.jacobian_witness);
    CHECK(numerical_rank(jacobian_at(QuadProblem{e2, -1.0}, *red.jacobian_witness)) == 3);

    const FamilyRankResult r1 = reduce_family_rank(QuadProblem{fx::example1(), -1.0});
    REQUIRE(std::holds_alternative<FamilyRankReduced>(r1));
    CHECK(std::get<FamilyRankReduced>(r1).jacobian_rank_bounded);

    const SymMatrix a{{1, 2}, {2, 0}};
    const FamilyRankResult same = reduce_family_rank(QuadProblem{{a, a, a}, -1.0});
    REQUIRE(std::holds_alternative<FamilyRankReduced>(same));
    CHECK(std::get<FamilyRankReduced>(same).rank.rank == 1);

    const FamilyRankResult v = reduce_family_rank(QuadProblem{fx::rank3_triple(), -1.0});
    REQUIRE(std::holds_alternative<JacobianRankWitness>(v));
    const auto& w = std::get<JacobianRankWitness>(v);
    CHECK(w.jacobian_rank == 3);
    CHECK(numerical_rank(jacobian_at(QuadProblem{fx::rank3_triple(), -1.0}, w.witness)) == 3);
}

TEST_CASE("quad_certificate") {
    const auto e1 = fx::example1();
    const CertificateReport r1 = quad_certificate(QuadProblem{e1, -1.0});
    REQUIRE(r1.certified());
    CHECK(certificate_holds(e1, FirstOrderCone::whole_space(2), r1.certified()->weights));
    CHECK(certificate_holds(e1, FirstOrderCone::whole_space(2), SimplexWeights(Vector{0, 0.6, 0.4})));
    CHECK(r1.residuals.at("rank_at_zero") == 1.0);
    CHECK(r1.residuals.at("max_jacobian_rank") == 2.0);

    const auto e2 = fx::example2();
    const CertificateReport r2 = quad_certificate(QuadProblem{e2, -1.0});
    REQUIRE(r2.certified());
    CHECK(certificate_holds(e2, FirstOrderCone::whole_space(2), SimplexWeights::uniform(3)));
    CHECK(r2.residuals.at("jacobian_hypothesis") == 0.0);

    CHECK(quad_certificate(QuadProblem{fx::rank3_triple(), -1.0}).violation());
    CHECK_THROWS_AS(quad_certificate(QuadProblem{e1, 1.0}), InputError);
}

TEST_CASE("to_kkt") {
    const KKTData d = to_kkt(QuadProblem{fx::example1(), -1.0});
    CHECK(d.n == 3);
    CHECK(d.grad_f == Vector{0, 0, 1});
    CHECK(d.p1() == 0);
    CHECK(d.active == std::vector<std::size_t>{0, 1, 2});
    CHECK(check_mfcq(d));
    CHECK(multiplier_vertices(d).size() == 3);

    const KKTData one = to_kkt(QuadProblem{{SymMatrix::identity(2)}, -1.0});
    const auto v = multiplier_vertices(one);
    REQUIRE(v.size() == 1);
    CHECK(v[0].mu == Vector{1});
    const SecondOrderResult s = second_order_certificate(one);
    REQUIRE(s.report.certified());
    CHECK(s.report.certified()->weights[0] == 1.0);
}

TEST_CASE("property: route equivalence") {
    gen::Rng rng(52);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
        const std::size_t m = static_cast<std::size_t>(rng.integer(1, 5));
        const QuadProblem prob{gen::rank2_family(rng, n, m), -1.0};
        const CertificateReport direct = quad_certificate(prob);
        const SecondOrderResult via = second_order_certificate(to_kkt(prob));
        CHECK((direct.certified() != nullptr) == (via.report.certified() != nullptr));
        const FirstOrderCone rn = FirstOrderCone::whole_space(n);
        if (const Certified* c = direct.certified()) CHECK(certificate_holds(prob.matrices, rn, c->weights));
        if (via.multiplier) {
            // The simplex of multipliers is the weight set, so the multiplier itself is a valid weight vector.
            CHECK(certificate_holds(prob.matrices, rn, SimplexWeights::normalized(via.multiplier->mu)));
        }
    }
}

TEST_CASE("property: dependence extraction recovers delta") {
    gen::Rng rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 6));
        const SymMatrix a = gen::sym(rng, n), b = gen::sym(rng, n);
        const double delta = rng.coin(0.7) ? std::pow(10.0, rng.uniform(-2, 3)) : -rng.uniform(0.01, 0.99);
        const DependenceResult r = extract_dependence(a, b, dependent_third(a, b, delta));
        REQUIRE(std::holds_alternative<DependenceDelta>(r));
        CHECK(std::abs(std::get<DependenceDelta>(r).delta - delta) <= 1e-8 * std::abs(delta));
    }
}

TEST_CASE("property: set rank 3 gives a rank-3 Jacobian point") {
    gen::Rng rng(54);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 4));
        const QuadProblem prob{{gen::sym(rng, n), gen::sym(rng, n), gen::sym(rng, n)}, -1.0};
        REQUIRE(matrix_set_rank(prob.matrices).rank == 3);
        CHECK_FALSE(rank_increase_check(prob).satisfied);
        CHECK(std::holds_alternative<JacobianRankWitness>(reduce_family_rank(prob)));
    }
}

TEST_CASE("property: affine families keep the Jacobian rank at most 2") {
    gen::Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 4));
        const SymMatrix b1 = gen::sym(rng, n), b2 = gen::sym(rng, n);
        std::vector<SymMatrix> fam;
        for (int i = 0; i < 4; ++i) {
            const double s = rng.uniform(-2, 2);
            SymMatrix a = b1;
            a *= s;
            a.add_scaled(1.0 - s, b2);
            fam.push_back(a);
        }
        const QuadProblem prob{fam, -1.0};
        CHECK(rank_increase_check(prob, 200).satisfied);
        const FamilyRankResult r = reduce_family_rank(prob);
        REQUIRE(std::holds_alternative<FamilyRankReduced>(r));
        CHECK(std::get<FamilyRankReduced>(r).jacobian_rank_bounded);
    }
}

TEST_CASE("property: max-form sign is invariant under positive scaling") {
    gen::Rng rng(56);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
        const std::vector<SymMatrix> fam{gen::sym(rng, n), gen::sym(rng, n), gen::sym(rng, n)};
        const Vector x = gen::vector(rng, n);
        const double s = std::pow(10.0, rng.uniform(-3, 3));
        const double v = max_form(fam, x), vs = max_form(fam, scaled(s, x));
        CHECK((v >= 0) == (vs >= 0));
        CHECK(std::abs(vs - s * s * v) <= 1e-10 * std::abs(s * s * v) + 1e-300);
    }
    (void)dense;
}
