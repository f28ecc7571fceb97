#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sga/grid.hpp"

namespace sga {

// f^c(x) = min_y { ||x - y||^2 / 2 - f(y) } over grid nodes, with the
// minimizing node recorded per cell.
struct CTransformResult {
    PotentialField fc;
    std::vector<std::int32_t> argmin; // flat grid index of y*(x) per cell
};

// Exact discrete c-transform via d per-axis lower-envelope passes
// (axis order 1..d). Ties break toward the smallest index in the key
// order (y_d, ..., y_1): the last axis is tie-broken first.
CTransformResult c_transform_fast(const PotentialField& f);

// Exhaustive O(n^2) oracle with the identical arithmetic and tie rule.
// Guarded to <= 1e5 cells.
CTransformResult c_transform_brute(const PotentialField& f);

// (f^c)^c: the c-concave envelope of f.
PotentialField double_c_transform(const PotentialField& f);

// 1D building block, exposed for direct testing against hand-enumerable
// node sets: out[q] = min_p { (pos[q]-pos[p])^2/2 + src[p] }.
void envelope_transform_1d(std::span<const double> pos, std::span<const double> src,
                           std::span<double> out, std::span<std::int32_t> argmin);

void brute_transform_1d(std::span<const double> pos, std::span<const double> src,
                        std::span<double> out, std::span<std::int32_t> argmin);

} // namespace sga
