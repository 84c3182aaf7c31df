#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "yuancert/errors.hpp"
#include "yuancert/oracle.hpp"

using namespace yuancert;

TEST_CASE("sample_max_nonneg") {
    const FirstOrderCone r2 = FirstOrderCone::whole_space(2);
    CHECK(std::holds_alternative<oracle::NoWitnessFound>(oracle::sample_max_nonneg(fx::example2(), r2, 10000, 1)));

    SymMatrix neg = SymMatrix::identity(2);
    neg *= -1.0;
    const std::vector<SymMatrix> single{neg};
    const FirstOrderCone ray = FirstOrderCone::make(2, {}, Vector{1, 1});
    const auto w = oracle::sample_max_nonneg(single, ray, 10, 1);
    REQUIRE(std::holds_alternative<oracle::Witness>(w));
    CHECK(std::get<oracle::Witness>(w).form_values[0] == doctest::Approx(-1.0));
    CHECK(cone_contains(ray, std::get<oracle::Witness>(w).x));

    const auto e2 = fx::example2();
    const std::vector<SymMatrix> pair{e2[0], e2[1]};
    const auto pw = oracle::sample_max_nonneg(pair, r2, 10000, 1);
    REQUIRE(std::holds_alternative<oracle::Witness>(pw));
    CHECK(refutation_holds(pair, r2, std::get<oracle::Witness>(pw).x));
}

TEST_CASE("simplex_grid_search") {
    const FirstOrderCone r2 = FirstOrderCone::whole_space(2);
    const auto g2 = oracle::simplex_grid_search(fx::example2(), r2, 3);
    CHECK(std::abs(g2.best_lambda_min) <= 1e-12);
    for (std::size_t i = 0; i < 3; ++i) CHECK(g2.best_t[i] == doctest::Approx(1.0 / 3));

    const std::vector<SymMatrix> id{SymMatrix::identity(2)};
    const auto gi = oracle::simplex_grid_search(id, r2, 7);
    CHECK(gi.best_t[0] == 1.0);
    CHECK(gi.best_lambda_min == doctest::Approx(1.0));

    const auto g1 = oracle::simplex_grid_search(fx::example1(), r2, 10);
    CHECK(g1.best_lambda_min >= 0.0);
    CHECK(g1.best_lambda_min >= (1.4 - std::sqrt(1.8)) / 2 - 1e-12);
}

TEST_CASE("hull_psd_search") {
    const FirstOrderCone r2 = FirstOrderCone::whole_space(2);
    const auto e1 = fx::example1();
    const auto h1 = oracle::hull_psd_search(e1, r2);
    CHECK(h1.best_lambda_min > 0.0);
    CHECK(certificate_holds(e1, r2, h1.best_t));
    CHECK(h1.best_lambda_min == doctest::Approx(0.04).epsilon(1e-6));

    const auto h2 = oracle::hull_psd_search(fx::example2(), r2);
    CHECK(std::abs(h2.best_lambda_min) <= 1e-9);

    const SymMatrix a{{1, 0}, {0, -2}};
    SymMatrix na = a;
    na *= -1.0;
    const std::vector<SymMatrix> opp{a, na};
    const auto h3 = oracle::hull_psd_search(opp, r2);
    CHECK(std::abs(h3.best_lambda_min) <= 1e-9);
    CHECK(h3.best_t[0] == doctest::Approx(0.5).epsilon(1e-6));

    CHECK_THROWS_AS(oracle::hull_psd_search(fx::rank3_triple(), r2), HypothesisViolated);
}

TEST_CASE("oracle determinism") {
    gen::Rng rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const auto fam = gen::rank2_family(rng, 3, 3);
        const FirstOrderCone k = gen::cone(rng, 3);
        const auto a = oracle::sample_max_nonneg(fam, k, 500, 9), b = oracle::sample_max_nonneg(fam, k, 500, 9);
        REQUIRE(a.index() == b.index());
        if (const auto* w = std::get_if<oracle::Witness>(&a)) CHECK(w->x == std::get<oracle::Witness>(b).x);
        const auto g1 = oracle::simplex_grid_search(fam, k, 12), g2 = oracle::simplex_grid_search(fam, k, 12);
        CHECK(g1.best_t.values() == g2.best_t.values());
    }
}
