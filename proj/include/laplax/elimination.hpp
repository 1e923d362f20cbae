#pragma once

#include <span>
#include <vector>

#include "laplax/graph.hpp"

namespace laplax {

// One elimination: a pendant vertex folded into its neighbor, or a
// degree-two vertex spliced out with its two edges replaced by their series
// combination (merged additively with any pre-existing edge).
struct ElimStep {
    enum class Kind : unsigned char { Degree1, Degree2 };
    Kind kind = Kind::Degree1;
    int v = -1;             // eliminated vertex (host id)
    int u1 = -1;            // neighbor (the only one for Degree1)
    int u2 = -1;            // second neighbor (Degree2)
    double w1 = 0.0;        // weight of (v,u1) at elimination time
    double w2 = 0.0;        // weight of (v,u2)
    double w_prior = 0.0;   // pre-existing (u1,u2) weight, 0 when absent
    bool merged_in_tree = false;  // resulting (u1,u2) edge is a tree edge
};

// Ordered log of eliminations plus the surviving-vertex relabeling. Replay
// reproduces the reduced graph; the rhs maps forward and solutions extend
// backward through exact harmonic identities.
struct EliminationRecord {
    int n_before = 0;
    std::vector<ElimStep> steps;
    std::vector<int> keep_map;  // host id -> compact id, -1 if eliminated
    std::vector<int> kept_ids;  // compact id -> host id

    int n_after() const { return int(kept_ids.size()); }

    // b on the host vertex set -> rhs on the reduced vertex set.
    std::vector<double> forward_rhs(std::span<const double> b) const;

    // x_hat solves the reduced system (for the forward-eliminated rhs of b);
    // returns x on the host vertex set satisfying every eliminated row
    // exactly. Kept rows copy x_hat through the relabeling.
    std::vector<double> extend_solution(std::span<const double> x_hat,
                                        std::span<const double> b) const;

    // Applies the recorded steps to an arbitrary graph on the same vertex
    // set; consistency check used by the chain verifier.
    WeightedGraph replay(const WeightedGraph& host) const;
};

struct EliminationResult {
    WeightedGraph g_hat;     // no vertices of degree <= 2 (or a single vertex)
    SpanningTree t_hat;      // spans g_hat; image of the input tree
    EliminationRecord record;
    std::vector<int> tree_edge_ids;  // g_hat edge ids forming t_hat
};

// Eliminates degree-1 and degree-2 vertices until none remain, maintaining
// the spanning tree image. The off-tree stretch never increases, and the
// output has at most 2j-2 vertices and 3j-3 edges where j = m - n + 1.
EliminationResult greedy_elimination(const WeightedGraph& g, const SpanningTree& t);

} // namespace laplax
