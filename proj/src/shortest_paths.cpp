#include "laplax/shortest_paths.hpp"

#include <limits>

#include "laplax/multiqueue.hpp"

namespace laplax {

std::vector<double> dijkstra_k_distinct(const WeightedGraph& g, const LengthClasses& lc,
                                        std::span<const int> sources, WorkCounter* wc) {
    int n = g.vertex_count();
    require(int(lc.class_of.size()) == g.edge_count(), "length classes do not match edge list");
    require(!sources.empty(), "no source vertices");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(std::size_t(n), inf);
    std::vector<char> settled(std::size_t(n), 0);

    MonotoneMultiQueue q(lc.values, n);
    for (int s : sources) {
        require(s >= 0 && s < n, "source out of range");
        if (!q.contains(s)) q.seed(s);
    }
    while (!q.empty()) {
        auto [v, d] = q.delete_min();
        settled[std::size_t(v)] = 1;
        dist[std::size_t(v)] = d;
        for (auto [u, eid] : g.neighbors(v)) {
            if (wc) wc->touch(1);
            if (settled[std::size_t(u)]) continue;
            int j = lc.class_of[std::size_t(eid)];
            double cand = d + lc.values[std::size_t(j)];
            if (!q.contains(u))
                q.insert(u, j);
            else if (cand < q.key(u))
                q.decrease_key(u, j);
        }
    }
    return dist;
}

} // namespace laplax
