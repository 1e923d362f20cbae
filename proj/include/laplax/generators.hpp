#pragma once

#include <cstdint>

#include "laplax/graph.hpp"

namespace laplax {

// Deterministic benchmark-graph generators. Weights are 1 when
// w_min == w_max, otherwise drawn uniformly from [w_min, w_max].
struct GeneratorParams {
    double w_min = 1.0;
    double w_max = 1.0;
    std::uint64_t seed = 1;
};

WeightedGraph make_grid(int rows, int cols, const GeneratorParams& p = {});
WeightedGraph make_torus(int rows, int cols, const GeneratorParams& p = {});  // dims >= 3
WeightedGraph make_ring(int n, const GeneratorParams& p = {});                // n >= 3
// d >= 3, n*d even, d < n; pairing model resampled until simple.
WeightedGraph make_random_regular(int n, int degree, const GeneratorParams& p = {});

} // namespace laplax
