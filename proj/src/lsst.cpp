#include "laplax/lsst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laplax/decomposition.hpp"
#include "laplax/rng.hpp"
#include "laplax/shortest_paths.hpp"

namespace laplax {

namespace {

// Union-find over host vertex ids, for spanning-tree enumeration.
struct MiniDsu {
    std::vector<int> p;
    explicit MiniDsu(int n) : p(std::size_t(n)) {
        for (int i = 0; i < n; ++i) p[std::size_t(i)] = i;
    }
    int find(int x) {
        while (p[std::size_t(x)] != x) x = p[std::size_t(x)] = p[std::size_t(p[std::size_t(x)])];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[std::size_t(a)] = b;
        return true;
    }
};

// Shortest-path tree on true lengths; returns host edge ids.
std::vector<int> shortest_path_tree(const WeightedGraph& g, int root) {
    std::vector<double> lengths(std::size_t(g.edge_count()));
    for (int i = 0; i < g.edge_count(); ++i) lengths[std::size_t(i)] = 1.0 / g.edge(i).w;
    LengthClasses lc = LengthClasses::from_lengths(lengths);
    std::vector<double> dist = dijkstra_k_distinct(g, lc, root);
    std::vector<int> parent_edge(std::size_t(g.vertex_count()), -1);
    // the settling relaxation satisfies dist[u] + len == dist[v] exactly, so
    // an exact match always exists; smallest edge id breaks ties
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (v == root) continue;
        for (auto [u, eid] : g.neighbors(v)) {
            double via = dist[std::size_t(u)] + lc.values[std::size_t(lc.class_of[std::size_t(eid)])];
            if (via == dist[std::size_t(v)] && dist[std::size_t(u)] < dist[std::size_t(v)] &&
                (parent_edge[std::size_t(v)] < 0 || eid < parent_edge[std::size_t(v)]))
                parent_edge[std::size_t(v)] = eid;
        }
        ensure(parent_edge[std::size_t(v)] >= 0, "no shortest-path parent found");
    }
    std::vector<int> ids;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (v != root) ids.push_back(parent_edge[std::size_t(v)]);
    return ids;
}

// Total stretch of a candidate tiny tree straight from an all-pairs
// resistance table; avoids per-candidate tree construction.
double tiny_tree_stretch(const WeightedGraph& g, std::span<const int> edge_ids) {
    int n = g.vertex_count();
    std::vector<char> in_tree(std::size_t(g.edge_count()), 0);
    for (int e : edge_ids) in_tree[std::size_t(e)] = 1;
    // resistance to every vertex by DFS from each source over tree edges
    std::vector<double> res(std::size_t(n) * std::size_t(n), 0.0);
    std::vector<int> stack;
    std::vector<char> seen(std::size_t(n), 0);
    for (int s = 0; s < n; ++s) {
        std::fill(seen.begin(), seen.end(), 0);
        seen[std::size_t(s)] = 1;
        stack.assign(1, s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [u, eid] : g.neighbors(v)) {
                if (!in_tree[std::size_t(eid)] || seen[std::size_t(u)]) continue;
                seen[std::size_t(u)] = 1;
                res[std::size_t(s) * std::size_t(n) + std::size_t(u)] =
                    res[std::size_t(s) * std::size_t(n) + std::size_t(v)] + 1.0 / g.edge(eid).w;
                stack.push_back(u);
            }
        }
    }
    double total = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
        if (in_tree[std::size_t(e)]) continue;
        const Edge& ed = g.edge(e);
        total += ed.w * res[std::size_t(ed.u) * std::size_t(n) + std::size_t(ed.v)];
    }
    return total;
}

// Exhaustive minimum-total-stretch spanning tree for tiny subgraphs.
std::vector<int> brute_force_tree(const WeightedGraph& g, int /*root*/) {
    int n = g.vertex_count();
    int m = g.edge_count();
    int need = n - 1;
    std::vector<int> choice(std::size_t(need), 0);
    std::vector<int> best;
    double best_stretch = std::numeric_limits<double>::infinity();

    // lexicographic combinations with union-find pruning
    auto rec = [&](auto&& self, int pos, int start, MiniDsu dsu) -> void {
        if (pos == need) {
            double s = tiny_tree_stretch(g, choice);
            if (s < best_stretch) {
                best_stretch = s;
                best = choice;
            }
            return;
        }
        for (int e = start; e <= m - (need - pos); ++e) {
            const Edge& ed = g.edge(e);
            MiniDsu next = dsu;
            if (!next.unite(ed.u, ed.v)) continue;  // would close a cycle
            choice[std::size_t(pos)] = e;
            self(self, pos + 1, e + 1, std::move(next));
        }
    };
    rec(rec, 0, 0, MiniDsu(n));
    ensure(!best.empty() || n <= 1, "no spanning tree found in connected graph");
    return best;
}

struct Builder {
    const WeightedGraph& host;
    LsstOptions opt;

    // Subproblem over host vertex ids; returns host edge ids of its tree.
    std::vector<int> build(const std::vector<int>& vertices, int center_host) {
        InducedSubgraph sub = host.induced(vertices);
        int n = sub.graph.vertex_count();
        int local_center =
            int(std::lower_bound(vertices.begin(), vertices.end(), center_host) - vertices.begin());

        if (n <= 1) return {};
        if (n <= opt.leaf_size) {
            std::vector<int> local = n <= opt.brute_force_size
                                         ? brute_force_tree(sub.graph, local_center)
                                         : shortest_path_tree(sub.graph, local_center);
            std::vector<int> hosts;
            for (int e : local) hosts.push_back(sub.edge_of[std::size_t(e)]);
            return hosts;
        }

        // lengths, clamped to [r n^-3, r] around the current radius, then rounded
        int m = sub.graph.edge_count();
        std::vector<double> len(std::size_t(m), 0.0);
        for (int e = 0; e < m; ++e) len[std::size_t(e)] = 1.0 / sub.graph.edge(e).w;
        LengthClasses exact = LengthClasses::from_lengths(len);
        std::vector<double> dist0 = dijkstra_k_distinct(sub.graph, exact, local_center);
        double r = 0.0;
        for (double d : dist0) r = std::max(r, d);
        if (r == 0.0) return shortest_path_tree_hosts(sub, local_center);

        double lo = r / (double(n) * double(n) * double(n));
        for (double& d : len) d = std::min(std::max(d, lo), r);
        RoundedLengths rounded = round_lengths(len);
        LengthClasses lc = LengthClasses::from_rounded(rounded);

        StarPartition sp =
            star_partition(sub.graph, lc, local_center, opt.ball_constant, opt.cone_constant);
        if (sp.parts.size() == 1) return shortest_path_tree_hosts(sub, local_center);

        std::vector<int> tree_edges;
        for (const StarPart& part : sp.parts) {
            std::vector<int> verts_host;
            verts_host.reserve(part.vertices.size());
            for (int v : part.vertices) verts_host.push_back(sub.vertex_of[std::size_t(v)]);
            std::sort(verts_host.begin(), verts_host.end());
            int anchor_host = sub.vertex_of[std::size_t(part.anchor)];
            std::vector<int> child = build(verts_host, anchor_host);
            tree_edges.insert(tree_edges.end(), child.begin(), child.end());
            if (part.bridge_edge >= 0)
                tree_edges.push_back(sub.edge_of[std::size_t(part.bridge_edge)]);
        }
        return tree_edges;
    }

    std::vector<int> shortest_path_tree_hosts(const InducedSubgraph& sub, int local_center) {
        std::vector<int> local = shortest_path_tree(sub.graph, local_center);
        std::vector<int> hosts;
        for (int e : local) hosts.push_back(sub.edge_of[std::size_t(e)]);
        return hosts;
    }
};

} // namespace

SpanningTree low_stretch_tree(const WeightedGraph& g, const LsstOptions& opt) {
    require(g.connected(), "low_stretch_tree needs a connected graph");
    int n = g.vertex_count();
    if (n == 0) return SpanningTree();
    Rng rng(opt.seed);
    int center = int(rng.next_below(std::uint64_t(std::max(n, 1))));

    Builder b{g, opt};
    std::vector<int> all(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) all[std::size_t(i)] = i;
    std::vector<int> edge_ids = b.build(all, center);
    ensure(int(edge_ids.size()) == n - 1, "star recursion did not produce a spanning tree");
    return SpanningTree::from_host_edges(g, edge_ids, center);
}

} // namespace laplax
