#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>

#include "yuancert/cone.hpp"
#include "yuancert/matrix.hpp"
#include "yuancert/yuan.hpp"

/// Brute-force checks that share no search logic with the certificate solvers.
namespace yuancert::oracle {

struct NoWitnessFound {};
struct Witness {
    Vector x;  // unit vector in K
    Vector form_values;
};
using SampleVerdict = std::variant<NoWitnessFound, Witness>;

/// Samples unit vectors of span(K) and returns the first one on which every form is below
/// -kCertTol * scale. Each sample also covers its negation, so only one of x, -x is drawn.
SampleVerdict sample_max_nonneg(std::span<const SymMatrix> family, const FirstOrderCone& k, int samples,
                                std::uint64_t seed);

struct SearchResult {
    SimplexWeights best_t;
    double best_lambda_min;
};

/// Exhaustive search over simplex points whose coordinates are multiples of 1/resolution.
SearchResult simplex_grid_search(std::span<const SymMatrix> family, const FirstOrderCone& k, int resolution);

/// For families of set rank <= 2: maximizes the restricted smallest eigenvalue over the convex
/// hull of the members' basis coordinates by nested ternary search, then recovers simplex
/// weights by linear programming. Throws HypothesisViolated when the set rank exceeds 2.
SearchResult hull_psd_search(std::span<const SymMatrix> family, const FirstOrderCone& k);

}  // namespace yuancert::oracle
