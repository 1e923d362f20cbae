#include "laplax/stretch.hpp"

#include <algorithm>
#include <unordered_set>

namespace laplax {

namespace {

class Dsu {
public:
    explicit Dsu(int n) : parent_(std::size_t(n)), rank_(std::size_t(n), 0) {
        for (int i = 0; i < n; ++i) parent_[std::size_t(i)] = i;
    }
    int find(int x) {
        int r = x;
        while (parent_[std::size_t(r)] != r) r = parent_[std::size_t(r)];
        while (parent_[std::size_t(x)] != r) {
            int nx = parent_[std::size_t(x)];
            parent_[std::size_t(x)] = r;
            x = nx;
        }
        return r;
    }
    // returns the new root
    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (rank_[std::size_t(a)] < rank_[std::size_t(b)]) std::swap(a, b);
        parent_[std::size_t(b)] = a;
        if (rank_[std::size_t(a)] == rank_[std::size_t(b)]) ++rank_[std::size_t(a)];
        return a;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

std::uint64_t pair_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint64_t(std::uint32_t(v));
}

} // namespace

std::vector<double> tree_path_resistances(const SpanningTree& t,
                                          std::span<const std::pair<int, int>> queries) {
    int n = t.vertex_count();
    // queries attached to both endpoints
    std::vector<std::vector<std::pair<int, int>>> pending((std::size_t(n)));  // (other, query id)
    for (int q = 0; q < int(queries.size()); ++q) {
        auto [u, v] = queries[std::size_t(q)];
        require(u >= 0 && u < n && v >= 0 && v < n, "query endpoint out of range");
        pending[std::size_t(u)].push_back({v, q});
        pending[std::size_t(v)].push_back({u, q});
    }

    // children lists in BFS order
    std::vector<std::vector<int>> children((std::size_t(n)));
    for (int v : t.bfs_order())
        if (v != t.root()) children[std::size_t(t.parent(v))].push_back(v);

    Dsu dsu(n);
    std::vector<int> ancestor(std::size_t(n), 0);
    std::vector<char> done(std::size_t(n), 0);
    std::vector<int> lca(queries.size(), -1);

    struct Frame {
        int v;
        std::size_t next_child;
    };
    std::vector<Frame> stack;
    if (n > 0) {
        stack.push_back({t.root(), 0});
        ancestor[std::size_t(t.root())] = t.root();
    }
    while (!stack.empty()) {
        Frame& f = stack.back();
        auto& kids = children[std::size_t(f.v)];
        if (f.next_child < kids.size()) {
            int c = kids[f.next_child++];
            ancestor[std::size_t(c)] = c;
            stack.push_back({c, 0});
            continue;
        }
        int v = f.v;
        stack.pop_back();
        done[std::size_t(v)] = 1;
        for (auto [other, q] : pending[std::size_t(v)])
            if (done[std::size_t(other)] && lca[std::size_t(q)] < 0)
                lca[std::size_t(q)] = ancestor[std::size_t(dsu.find(other))];
        if (v != t.root()) {
            int p = t.parent(v);
            int root = dsu.unite(p, v);
            ancestor[std::size_t(root)] = p;
        }
    }

    std::vector<double> res(queries.size(), 0.0);
    for (int q = 0; q < int(queries.size()); ++q) {
        auto [u, v] = queries[std::size_t(q)];
        if (u == v) continue;
        int a = lca[std::size_t(q)];
        ensure(a >= 0, "LCA query left unanswered; tree disconnected?");
        res[std::size_t(q)] =
            t.root_resistance(u) + t.root_resistance(v) - 2.0 * t.root_resistance(a);
    }
    return res;
}

namespace {

StretchReport stretch_for_queries(const SpanningTree& t,
                                  std::span<const std::pair<int, int>> endpoints,
                                  std::span<const double> weights,
                                  std::span<const int> ids) {
    StretchReport rep;
    std::vector<double> res = tree_path_resistances(t, endpoints);
    rep.edge_ids.assign(ids.begin(), ids.end());
    rep.stretch.resize(res.size());
    KahanSum total;
    for (std::size_t i = 0; i < res.size(); ++i) {
        double s = weights[i] * res[i];
        rep.stretch[i] = s;
        total.add(s);
        rep.max = std::max(rep.max, s);
    }
    rep.total = total.value();
    rep.avg = res.empty() ? 0.0 : rep.total / double(res.size());
    return rep;
}

} // namespace

StretchReport total_stretch(const WeightedGraph& g, const SpanningTree& t) {
    require(t.vertex_count() == g.vertex_count(), "tree does not span the graph");
    std::unordered_set<std::uint64_t> tree_pairs;
    tree_pairs.reserve(std::size_t(t.vertex_count()) * 2);
    for (int v : t.bfs_order())
        if (v != t.root()) tree_pairs.insert(pair_key(v, t.parent(v)));

    std::vector<std::pair<int, int>> endpoints;
    std::vector<double> weights;
    std::vector<int> ids;
    for (int id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edge(id);
        if (tree_pairs.count(pair_key(e.u, e.v))) continue;
        endpoints.push_back({e.u, e.v});
        weights.push_back(e.w);
        ids.push_back(id);
    }
    return stretch_for_queries(t, endpoints, weights, ids);
}

StretchReport total_stretch(const SampleGraph& h) {
    SpanningTree t = h.tree();
    std::vector<std::pair<int, int>> endpoints;
    std::vector<double> weights;
    std::vector<int> ids;
    for (int i = 0; i < int(h.samples.size()); ++i) {
        const Sample& s = h.samples[std::size_t(i)];
        endpoints.push_back({s.u, s.v});
        weights.push_back(s.w);
        ids.push_back(i);
    }
    return stretch_for_queries(t, endpoints, weights, ids);
}

} // namespace laplax
