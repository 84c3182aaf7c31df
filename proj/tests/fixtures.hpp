#pragma once

#include <vector>

#include "yuancert/matrix.hpp"

namespace fx {

using yuancert::SymMatrix;

inline std::vector<SymMatrix> example1() {
    return {SymMatrix{{1, -1}, {-1, 1}}, SymMatrix{{-2, 1}, {1, 1}}, SymMatrix{{4, -3}, {-3, 1}}};
}

inline std::vector<SymMatrix> example2() {
    return {SymMatrix{{-1, 0}, {0, 1}}, SymMatrix{{1, 2}, {2, -2}}, SymMatrix{{0, -2}, {-2, 1}}};
}

inline std::vector<yuancert::Matrix> nonsymmetric_triple() {
    return {yuancert::Matrix{{1, 0}, {0, 0}}, yuancert::Matrix{{1, 0}, {0, 1}}, yuancert::Matrix{{1, 0}, {1, 0}}};
}

// Diagonal units and the symmetrized off-diagonal unit: set rank 3.
inline std::vector<SymMatrix> rank3_triple() {
    return {SymMatrix{{1, 0}, {0, 0}}, SymMatrix{{0, 0}, {0, 1}}, SymMatrix{{0, 1}, {1, 0}}};
}

}  // namespace fx
