#pragma once

#include <span>
#include <vector>

#include "laplax/graph.hpp"
#include "laplax/rounding.hpp"

namespace laplax {

// Single- or multi-source shortest paths over lengths drawn from a small set
// of distinct values, driven by the monotone multi-queue. Unreachable
// vertices get +infinity.
std::vector<double> dijkstra_k_distinct(const WeightedGraph& g, const LengthClasses& lc,
                                        std::span<const int> sources,
                                        WorkCounter* wc = nullptr);

inline std::vector<double> dijkstra_k_distinct(const WeightedGraph& g, const LengthClasses& lc,
                                               int source, WorkCounter* wc = nullptr) {
    int s[1] = {source};
    return dijkstra_k_distinct(g, lc, std::span<const int>(s, 1), wc);
}

} // namespace laplax
