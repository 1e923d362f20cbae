#pragma once

#include <span>
#include <utility>
#include <vector>

#include "laplax/util.hpp"

namespace laplax {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 0.0;
};

struct InducedSubgraph;

// Undirected simple graph with strictly positive weights. Immutable after
// construction; the adjacency index is built once and kept consistent with
// the edge list.
class WeightedGraph {
public:
    WeightedGraph() = default;

    // Rejects self-loops, non-positive weights, out-of-range ids and
    // parallel edges.
    static WeightedGraph from_edges(int n, std::vector<Edge> edges);

    // Same, but parallel edges are merged by adding their weights. Used to
    // flatten multigraphs (sample graphs, elimination intermediates).
    static WeightedGraph from_edges_merge_parallel(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return int(edges_.size()); }

    const Edge& edge(int id) const { return edges_[std::size_t(id)]; }
    std::span<const Edge> edges() const { return edges_; }

    int degree(int v) const { return adj_off_[std::size_t(v) + 1] - adj_off_[std::size_t(v)]; }

    // (neighbor, edge id) pairs
    std::span<const std::pair<int, int>> neighbors(int v) const {
        return std::span<const std::pair<int, int>>(adj_).subspan(
            std::size_t(adj_off_[std::size_t(v)]),
            std::size_t(adj_off_[std::size_t(v) + 1] - adj_off_[std::size_t(v)]));
    }

    double total_weight() const;

    // Connected components as vertex id lists, ascending within each.
    std::vector<std::vector<int>> components() const;
    bool connected() const;

    // Induced subgraph plus old-id maps; edge order follows the host order.
    InducedSubgraph induced(std::span<const int> vertices) const;

private:
    void build_adjacency();

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> adj_off_;
    std::vector<std::pair<int, int>> adj_;
};

struct InducedSubgraph {
    WeightedGraph graph;
    std::vector<int> vertex_of;  // new id -> host id
    std::vector<int> edge_of;    // new edge id -> host edge id
};

// Rooted spanning tree over a vertex set, with per-edge weights copied from
// the host. Supports root-path resistance queries via prefix sums.
class SpanningTree {
public:
    SpanningTree() = default;

    // tree_edges must form a spanning tree of {0..n-1}. host_edge_ids, when
    // given, parallels tree_edges and records positions in a host edge list.
    static SpanningTree from_edges(int n, std::span<const Edge> tree_edges, int root,
                                   std::span<const int> host_edge_ids = {});

    // Convenience: pick tree edges of `g` by id.
    static SpanningTree from_host_edges(const WeightedGraph& g, std::span<const int> edge_ids,
                                        int root);

    int vertex_count() const { return int(parent_.size()); }
    int root() const { return root_; }
    int parent(int v) const { return parent_[std::size_t(v)]; }
    double parent_weight(int v) const { return parent_w_[std::size_t(v)]; }
    int parent_host_edge(int v) const { return parent_host_edge_[std::size_t(v)]; }
    int depth(int v) const { return depth_[std::size_t(v)]; }

    // Vertices in breadth-first order from the root.
    std::span<const int> bfs_order() const { return order_; }

    // Sum of reciprocal weights on the root path (resistance to root).
    double root_resistance(int v) const { return root_res_[std::size_t(v)]; }

    // Tree edges as (u=child, v=parent, w) in BFS order.
    std::vector<Edge> edge_list() const;

    // Membership flags over a host graph's edge list. Requires host ids.
    std::vector<char> host_membership(int host_edge_count) const;

    // Per-edge path resistance between endpoints, naive walk. O(depth).
    double path_resistance(int u, int v) const;

private:
    int root_ = 0;
    std::vector<int> parent_;
    std::vector<double> parent_w_;
    std::vector<int> parent_host_edge_;
    std::vector<int> depth_;
    std::vector<double> root_res_;
    std::vector<int> order_;
};

// Multigraph of samples: a (possibly rescaled) spanning-tree edge set plus
// off-tree samples, each carrying its own weight and the id of the host
// edge it was drawn from.
struct Sample {
    int u = 0;
    int v = 0;
    double w = 0.0;
    int parent_edge = -1;
};

struct SampleGraph {
    int n = 0;
    std::vector<Edge> tree_edges;
    std::vector<int> tree_host_edge_ids;  // positions in the source graph, may be empty
    std::vector<Sample> samples;

    int multi_edge_count() const { return int(tree_edges.size() + samples.size()); }

    // Parallel samples merged additively; edges sorted by endpoint pair.
    WeightedGraph flatten() const;

    SpanningTree tree(int root = 0) const;

    // Sample ids grouped by parent edge, each group contiguous.
    std::vector<std::pair<int, std::vector<int>>> groups_by_parent() const;
};

} // namespace laplax
