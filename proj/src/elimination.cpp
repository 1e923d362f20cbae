#include "laplax/elimination.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace laplax {

namespace {

struct Nb {
    double w = 0.0;
    bool tree = false;
};

using AdjMaps = std::vector<std::map<int, Nb>>;

AdjMaps build_maps(const WeightedGraph& g, const std::vector<char>* tree_flags) {
    AdjMaps adj(std::size_t(g.vertex_count()));
    for (int id = 0; id < g.edge_count(); ++id) {
        const Edge& e = g.edge(id);
        bool tr = tree_flags ? bool((*tree_flags)[std::size_t(id)]) : false;
        adj[std::size_t(e.u)][e.v] = {e.w, tr};
        adj[std::size_t(e.v)][e.u] = {e.w, tr};
    }
    return adj;
}

void remove_edge(AdjMaps& adj, int a, int b) {
    adj[std::size_t(a)].erase(b);
    adj[std::size_t(b)].erase(a);
}

} // namespace

EliminationResult greedy_elimination(const WeightedGraph& g, const SpanningTree& t) {
    require(t.vertex_count() == g.vertex_count(), "tree does not span the graph");
    int n = g.vertex_count();

    // tree membership by endpoint pair (weights may be rescaled copies)
    std::vector<char> tree_flags(std::size_t(g.edge_count()), 0);
    {
        std::map<std::pair<int, int>, int> pair_to_edge;
        for (int id = 0; id < g.edge_count(); ++id) {
            const Edge& e = g.edge(id);
            pair_to_edge[{std::min(e.u, e.v), std::max(e.u, e.v)}] = id;
        }
        for (int v : t.bfs_order()) {
            if (v == t.root()) continue;
            int p = t.parent(v);
            auto it = pair_to_edge.find({std::min(v, p), std::max(v, p)});
            require(it != pair_to_edge.end(), "tree edge missing from the graph");
            tree_flags[std::size_t(it->second)] = 1;
        }
    }

    AdjMaps adj = build_maps(g, &tree_flags);
    std::vector<char> gone(std::size_t(n), 0);
    std::vector<char> queued(std::size_t(n), 0);
    std::deque<int> fifo;
    auto enqueue = [&](int v) {
        if (!gone[std::size_t(v)] && !queued[std::size_t(v)] && adj[std::size_t(v)].size() <= 2) {
            queued[std::size_t(v)] = 1;
            fifo.push_back(v);
        }
    };
    for (int v = 0; v < n; ++v) enqueue(v);

    EliminationRecord rec;
    rec.n_before = n;

    while (!fifo.empty()) {
        int v = fifo.front();
        fifo.pop_front();
        queued[std::size_t(v)] = 0;
        if (gone[std::size_t(v)]) continue;
        auto& nbs = adj[std::size_t(v)];
        if (nbs.size() == 0 || nbs.size() > 2) continue;

        if (nbs.size() == 1) {
            auto [u1, info] = *nbs.begin();
            ensure(info.tree, "pendant edge must be a tree edge");
            ElimStep st;
            st.kind = ElimStep::Kind::Degree1;
            st.v = v;
            st.u1 = u1;
            st.w1 = info.w;
            rec.steps.push_back(st);
            remove_edge(adj, v, u1);
            gone[std::size_t(v)] = 1;
            enqueue(u1);
            continue;
        }

        auto it = nbs.begin();
        auto [u1, i1] = *it;
        auto [u2, i2] = *std::next(it);
        ensure(i1.tree || i2.tree, "degree-2 vertex with no tree edge");

        ElimStep st;
        st.kind = ElimStep::Kind::Degree2;
        st.v = v;
        st.u1 = u1;
        st.u2 = u2;
        st.w1 = i1.w;
        st.w2 = i2.w;
        double w_series = 1.0 / (1.0 / i1.w + 1.0 / i2.w);

        auto prior = adj[std::size_t(u1)].find(u2);
        bool prior_exists = prior != adj[std::size_t(u1)].end();
        st.w_prior = prior_exists ? prior->second.w : 0.0;
        bool prior_tree = prior_exists && prior->second.tree;

        bool in_tree;
        if (i1.tree && i2.tree) {
            // the spliced path was a tree path; a pre-existing (u1,u2) edge
            // cannot also be in the tree without closing a cycle
            ensure(!prior_tree, "tree cycle detected during splice");
            in_tree = true;
        } else {
            in_tree = prior_tree;
        }
        st.merged_in_tree = in_tree;
        rec.steps.push_back(st);

        remove_edge(adj, v, u1);
        remove_edge(adj, v, u2);
        Nb merged{w_series + st.w_prior, in_tree};
        adj[std::size_t(u1)][u2] = merged;
        adj[std::size_t(u2)][u1] = merged;
        gone[std::size_t(v)] = 1;
        enqueue(u1);
        enqueue(u2);
    }

    rec.keep_map.assign(std::size_t(n), -1);
    for (int v = 0; v < n; ++v) {
        if (gone[std::size_t(v)]) continue;
        rec.keep_map[std::size_t(v)] = int(rec.kept_ids.size());
        rec.kept_ids.push_back(v);
    }

    std::vector<Edge> edges;
    std::vector<char> edge_tree;
    for (int v : rec.kept_ids) {
        for (auto& [u, info] : adj[std::size_t(v)]) {
            if (u < v) continue;  // emit each pair once, ascending
            edges.push_back({rec.keep_map[std::size_t(v)], rec.keep_map[std::size_t(u)], info.w});
            edge_tree.push_back(info.tree ? 1 : 0);
        }
    }

    EliminationResult out;
    out.record = std::move(rec);
    out.g_hat = WeightedGraph::from_edges(out.record.n_after(), std::move(edges));
    for (int id = 0; id < out.g_hat.edge_count(); ++id)
        if (edge_tree[std::size_t(id)]) out.tree_edge_ids.push_back(id);
    ensure(int(out.tree_edge_ids.size()) == std::max(out.record.n_after() - 1, 0),
           "tree image lost edges during elimination");
    out.t_hat = SpanningTree::from_host_edges(out.g_hat, out.tree_edge_ids, 0);
    return out;
}

std::vector<double> EliminationRecord::forward_rhs(std::span<const double> b) const {
    require(int(b.size()) == n_before, "rhs size mismatch");
    std::vector<double> work(b.begin(), b.end());
    for (const ElimStep& st : steps) {
        double bv = work[std::size_t(st.v)];
        if (st.kind == ElimStep::Kind::Degree1) {
            work[std::size_t(st.u1)] += bv;
        } else {
            double denom = st.w1 + st.w2;
            work[std::size_t(st.u1)] += bv * (st.w1 / denom);
            work[std::size_t(st.u2)] += bv * (st.w2 / denom);
        }
    }
    std::vector<double> out(kept_ids.size());
    for (std::size_t i = 0; i < kept_ids.size(); ++i) out[i] = work[std::size_t(kept_ids[i])];
    return out;
}

std::vector<double> EliminationRecord::extend_solution(std::span<const double> x_hat,
                                                       std::span<const double> b) const {
    require(int(x_hat.size()) == n_after(), "solution size mismatch");
    require(int(b.size()) == n_before, "rhs size mismatch");

    // forward pass to recover each vertex's rhs at its elimination moment
    std::vector<double> work(b.begin(), b.end());
    std::vector<double> bv_at_step(steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const ElimStep& st = steps[k];
        double bv = work[std::size_t(st.v)];
        bv_at_step[k] = bv;
        if (st.kind == ElimStep::Kind::Degree1) {
            work[std::size_t(st.u1)] += bv;
        } else {
            double denom = st.w1 + st.w2;
            work[std::size_t(st.u1)] += bv * (st.w1 / denom);
            work[std::size_t(st.u2)] += bv * (st.w2 / denom);
        }
    }

    std::vector<double> x(std::size_t(n_before), 0.0);
    for (std::size_t i = 0; i < kept_ids.size(); ++i) x[std::size_t(kept_ids[i])] = x_hat[i];
    for (std::size_t k = steps.size(); k-- > 0;) {
        const ElimStep& st = steps[k];
        if (st.kind == ElimStep::Kind::Degree1)
            x[std::size_t(st.v)] = x[std::size_t(st.u1)] + bv_at_step[k] / st.w1;
        else
            x[std::size_t(st.v)] = (st.w1 * x[std::size_t(st.u1)] + st.w2 * x[std::size_t(st.u2)] +
                                    bv_at_step[k]) /
                                   (st.w1 + st.w2);
    }
    return x;
}

WeightedGraph EliminationRecord::replay(const WeightedGraph& host) const {
    require(host.vertex_count() == n_before, "replay host size mismatch");
    AdjMaps adj = build_maps(host, nullptr);
    for (const ElimStep& st : steps) {
        auto& nv = adj[std::size_t(st.v)];
        if (st.kind == ElimStep::Kind::Degree1) {
            require(nv.count(st.u1) == 1, "replay: missing pendant edge");
            remove_edge(adj, st.v, st.u1);
            continue;
        }
        require(nv.count(st.u1) == 1 && nv.count(st.u2) == 1, "replay: missing splice edges");
        double w1 = nv[st.u1].w, w2 = nv[st.u2].w;
        double w_series = 1.0 / (1.0 / w1 + 1.0 / w2);
        double prior = 0.0;
        auto it = adj[std::size_t(st.u1)].find(st.u2);
        if (it != adj[std::size_t(st.u1)].end()) prior = it->second.w;
        remove_edge(adj, st.v, st.u1);
        remove_edge(adj, st.v, st.u2);
        Nb merged{w_series + prior, false};
        adj[std::size_t(st.u1)][st.u2] = merged;
        adj[std::size_t(st.u2)][st.u1] = merged;
    }
    std::vector<Edge> edges;
    for (int v : kept_ids) {
        for (auto& [u, info] : adj[std::size_t(v)]) {
            require(keep_map[std::size_t(u)] >= 0, "replay left an edge to an eliminated vertex");
            if (u < v) continue;
            edges.push_back({keep_map[std::size_t(v)], keep_map[std::size_t(u)], info.w});
        }
    }
    return WeightedGraph::from_edges(n_after(), std::move(edges));
}

} // namespace laplax
