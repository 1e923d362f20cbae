#pragma once

#include <span>
#include <vector>

#include "laplax/graph.hpp"

namespace laplax {

// Stretch of the off-tree edges of a graph (or the off-tree samples of a
// sample graph) with respect to a spanning tree. Totals use compensated
// summation; avg/max are 0 when there are no off-tree edges.
struct StretchReport {
    std::vector<int> edge_ids;      // off-tree edge (or sample) indices
    std::vector<double> stretch;    // parallel to edge_ids
    double total = 0.0;
    double avg = 0.0;
    double max = 0.0;
    int off_tree_count() const { return int(edge_ids.size()); }
};

// Tree-path resistances for arbitrary endpoint pairs, answered offline in
// one pass (Tarjan lowest-common-ancestor with union-find plus root-prefix
// resistance sums).
std::vector<double> tree_path_resistances(const SpanningTree& t,
                                          std::span<const std::pair<int, int>> queries);

// An edge counts as a tree edge when its endpoint pair is a parent-child
// pair of `t`; weights are not compared, so scaled trees work too.
StretchReport total_stretch(const WeightedGraph& g, const SpanningTree& t);

// Off-tree samples of `h` against `h`'s own (scaled) tree.
StretchReport total_stretch(const SampleGraph& h);

} // namespace laplax
