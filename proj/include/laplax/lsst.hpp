#pragma once

#include <cstdint>

#include "laplax/graph.hpp"

namespace laplax {

struct LsstOptions {
    std::uint64_t seed = 1;
    int leaf_size = 16;        // below this, build a direct tree
    int brute_force_size = 8;  // below this, exhaustive minimum-stretch tree
    double ball_constant = 2.0;
    double cone_constant = 2.0;
};

// Spanning tree with low total off-tree stretch, built by recursive star
// partition over per-level clamped-and-rounded lengths (length = 1/weight)
// and re-weighted with the original edge weights. Requires a connected
// graph; the tree records host edge ids.
SpanningTree low_stretch_tree(const WeightedGraph& g, const LsstOptions& opt = {});

} // namespace laplax
