#include "laplax/graph.hpp"

#include <algorithm>
#include <queue>

namespace laplax {

namespace {

void check_edge(int n, const Edge& e) {
    require(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n,
            "edge endpoint out of range: (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    require(e.u != e.v, "self-loop at vertex " + std::to_string(e.u));
    require(e.w > 0.0, "non-positive weight on edge (" + std::to_string(e.u) + "," +
                           std::to_string(e.v) + ")");
}

std::uint64_t pair_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint64_t(std::uint32_t(v));
}

} // namespace

WeightedGraph WeightedGraph::from_edges(int n, std::vector<Edge> edges) {
    require(n >= 0, "negative vertex count");
    std::vector<std::uint64_t> keys;
    keys.reserve(edges.size());
    for (const Edge& e : edges) {
        check_edge(n, e);
        keys.push_back(pair_key(e.u, e.v));
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 1; i < keys.size(); ++i)
        require(keys[i] != keys[i - 1], "parallel edge detected; simple graph required");

    WeightedGraph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
}

WeightedGraph WeightedGraph::from_edges_merge_parallel(int n, std::vector<Edge> edges) {
    require(n >= 0, "negative vertex count");
    for (Edge& e : edges) {
        check_edge(n, e);
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    std::vector<Edge> merged;
    merged.reserve(edges.size());
    for (const Edge& e : edges) {
        if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
            merged.back().w += e.w;
        else
            merged.push_back(e);
    }
    WeightedGraph g;
    g.n_ = n;
    g.edges_ = std::move(merged);
    g.build_adjacency();
    return g;
}

void WeightedGraph::build_adjacency() {
    adj_off_.assign(std::size_t(n_) + 1, 0);
    for (const Edge& e : edges_) {
        ++adj_off_[std::size_t(e.u) + 1];
        ++adj_off_[std::size_t(e.v) + 1];
    }
    for (int v = 0; v < n_; ++v) adj_off_[std::size_t(v) + 1] += adj_off_[std::size_t(v)];
    adj_.resize(std::size_t(adj_off_[std::size_t(n_)]));
    std::vector<int> cursor(adj_off_.begin(), adj_off_.end() - 1);
    for (int id = 0; id < int(edges_.size()); ++id) {
        const Edge& e = edges_[std::size_t(id)];
        adj_[std::size_t(cursor[std::size_t(e.u)]++)] = {e.v, id};
        adj_[std::size_t(cursor[std::size_t(e.v)]++)] = {e.u, id};
    }
}

double WeightedGraph::total_weight() const {
    KahanSum s;
    for (const Edge& e : edges_) s.add(e.w);
    return s.value();
}

std::vector<std::vector<int>> WeightedGraph::components() const {
    std::vector<int> comp(std::size_t(n_), -1);
    std::vector<std::vector<int>> out;
    std::vector<int> stack;
    for (int s = 0; s < n_; ++s) {
        if (comp[std::size_t(s)] >= 0) continue;
        int id = int(out.size());
        out.emplace_back();
        comp[std::size_t(s)] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            out[std::size_t(id)].push_back(v);
            for (auto [u, eid] : neighbors(v)) {
                (void)eid;
                if (comp[std::size_t(u)] < 0) {
                    comp[std::size_t(u)] = id;
                    stack.push_back(u);
                }
            }
        }
        std::sort(out[std::size_t(id)].begin(), out[std::size_t(id)].end());
    }
    return out;
}

bool WeightedGraph::connected() const {
    if (n_ <= 1) return true;
    return components().size() == 1;
}

InducedSubgraph WeightedGraph::induced(std::span<const int> vertices) const {
    std::vector<int> new_id(std::size_t(n_), -1);
    InducedSubgraph out;
    out.vertex_of.assign(vertices.begin(), vertices.end());
    for (int i = 0; i < int(vertices.size()); ++i) new_id[std::size_t(vertices[std::size_t(i)])] = i;
    std::vector<Edge> es;
    for (int id = 0; id < int(edges_.size()); ++id) {
        const Edge& e = edges_[std::size_t(id)];
        int nu = new_id[std::size_t(e.u)], nv = new_id[std::size_t(e.v)];
        if (nu >= 0 && nv >= 0) {
            es.push_back({nu, nv, e.w});
            out.edge_of.push_back(id);
        }
    }
    out.graph = WeightedGraph::from_edges(int(vertices.size()), std::move(es));
    return out;
}

SpanningTree SpanningTree::from_edges(int n, std::span<const Edge> tree_edges, int root,
                                      std::span<const int> host_edge_ids) {
    require(root >= 0 && root < std::max(n, 1), "tree root out of range");
    require(int(tree_edges.size()) == n - 1 || (n == 0 && tree_edges.empty()),
            "spanning tree needs exactly n-1 edges, got " + std::to_string(tree_edges.size()));
    if (!host_edge_ids.empty())
        require(host_edge_ids.size() == tree_edges.size(), "host id list size mismatch");

    // adjacency over tree edges only
    std::vector<int> off(std::size_t(n) + 1, 0);
    for (const Edge& e : tree_edges) {
        require(e.u >= 0 && e.u < n && e.v >= 0 && e.v < n && e.u != e.v && e.w > 0,
                "invalid tree edge");
        ++off[std::size_t(e.u) + 1];
        ++off[std::size_t(e.v) + 1];
    }
    for (int v = 0; v < n; ++v) off[std::size_t(v) + 1] += off[std::size_t(v)];
    std::vector<std::pair<int, int>> adj(std::size_t(off[std::size_t(n)]));
    {
        std::vector<int> cur(off.begin(), off.end() - 1);
        for (int id = 0; id < int(tree_edges.size()); ++id) {
            const Edge& e = tree_edges[std::size_t(id)];
            adj[std::size_t(cur[std::size_t(e.u)]++)] = {e.v, id};
            adj[std::size_t(cur[std::size_t(e.v)]++)] = {e.u, id};
        }
    }

    SpanningTree t;
    t.root_ = root;
    t.parent_.assign(std::size_t(n), -1);
    t.parent_w_.assign(std::size_t(n), 0.0);
    t.parent_host_edge_.assign(std::size_t(n), -1);
    t.depth_.assign(std::size_t(n), 0);
    t.root_res_.assign(std::size_t(n), 0.0);
    t.order_.reserve(std::size_t(n));

    if (n == 0) return t;
    t.parent_[std::size_t(root)] = root;
    std::queue<int> q;
    q.push(root);
    t.order_.push_back(root);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (std::size_t i = std::size_t(off[std::size_t(v)]); i < std::size_t(off[std::size_t(v) + 1]); ++i) {
            auto [u, id] = adj[i];
            if (t.parent_[std::size_t(u)] >= 0) continue;
            t.parent_[std::size_t(u)] = v;
            t.parent_w_[std::size_t(u)] = tree_edges[std::size_t(id)].w;
            if (!host_edge_ids.empty()) t.parent_host_edge_[std::size_t(u)] = host_edge_ids[std::size_t(id)];
            t.depth_[std::size_t(u)] = t.depth_[std::size_t(v)] + 1;
            t.root_res_[std::size_t(u)] = t.root_res_[std::size_t(v)] + 1.0 / tree_edges[std::size_t(id)].w;
            t.order_.push_back(u);
            q.push(u);
        }
    }
    ensure(int(t.order_.size()) == n, "tree edges do not span the vertex set");
    return t;
}

SpanningTree SpanningTree::from_host_edges(const WeightedGraph& g, std::span<const int> edge_ids,
                                           int root) {
    std::vector<Edge> es;
    es.reserve(edge_ids.size());
    for (int id : edge_ids) es.push_back(g.edge(id));
    return from_edges(g.vertex_count(), es, root, edge_ids);
}

std::vector<Edge> SpanningTree::edge_list() const {
    std::vector<Edge> out;
    out.reserve(order_.size() > 0 ? order_.size() - 1 : 0);
    for (int v : order_)
        if (v != root_) out.push_back({v, parent_[std::size_t(v)], parent_w_[std::size_t(v)]});
    return out;
}

std::vector<char> SpanningTree::host_membership(int host_edge_count) const {
    std::vector<char> flags(std::size_t(host_edge_count), 0);
    for (int v : order_) {
        if (v == root_) continue;
        int id = parent_host_edge_[std::size_t(v)];
        ensure(id >= 0 && id < host_edge_count, "tree edge without host id");
        flags[std::size_t(id)] = 1;
    }
    return flags;
}

double SpanningTree::path_resistance(int u, int v) const {
    double r = 0.0;
    int a = u, b = v;
    while (depth_[std::size_t(a)] > depth_[std::size_t(b)]) {
        r += 1.0 / parent_w_[std::size_t(a)];
        a = parent_[std::size_t(a)];
    }
    while (depth_[std::size_t(b)] > depth_[std::size_t(a)]) {
        r += 1.0 / parent_w_[std::size_t(b)];
        b = parent_[std::size_t(b)];
    }
    while (a != b) {
        r += 1.0 / parent_w_[std::size_t(a)] + 1.0 / parent_w_[std::size_t(b)];
        a = parent_[std::size_t(a)];
        b = parent_[std::size_t(b)];
    }
    return r;
}

WeightedGraph SampleGraph::flatten() const {
    std::vector<Edge> es(tree_edges.begin(), tree_edges.end());
    es.reserve(tree_edges.size() + samples.size());
    for (const Sample& s : samples) es.push_back({s.u, s.v, s.w});
    return WeightedGraph::from_edges_merge_parallel(n, std::move(es));
}

SpanningTree SampleGraph::tree(int root) const {
    return SpanningTree::from_edges(n, tree_edges, root, tree_host_edge_ids);
}

std::vector<std::pair<int, std::vector<int>>> SampleGraph::groups_by_parent() const {
    std::vector<int> ids(samples.size());
    for (int i = 0; i < int(samples.size()); ++i) ids[std::size_t(i)] = i;
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        return samples[std::size_t(a)].parent_edge < samples[std::size_t(b)].parent_edge;
    });
    std::vector<std::pair<int, std::vector<int>>> out;
    for (int i : ids) {
        int pe = samples[std::size_t(i)].parent_edge;
        if (out.empty() || out.back().first != pe) out.push_back({pe, {}});
        out.back().second.push_back(i);
    }
    return out;
}

} // namespace laplax
