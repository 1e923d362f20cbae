#include "laplax/generators.hpp"

#include <algorithm>
#include <unordered_set>

#include "laplax/rng.hpp"

namespace laplax {

namespace {

double draw_weight(const GeneratorParams& p, Rng& rng) {
    if (p.w_min == p.w_max) return p.w_min;
    return rng.next_in(p.w_min, p.w_max);
}

void check_weights(const GeneratorParams& p) {
    require(p.w_min > 0.0 && p.w_max >= p.w_min, "weight range must be positive");
}

} // namespace

WeightedGraph make_grid(int rows, int cols, const GeneratorParams& p) {
    require(rows >= 2 && cols >= 2, "grid dimensions must be at least 2");
    check_weights(p);
    Rng rng(p.seed);
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<Edge> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), draw_weight(p, rng)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), draw_weight(p, rng)});
        }
    return WeightedGraph::from_edges(rows * cols, std::move(edges));
}

WeightedGraph make_torus(int rows, int cols, const GeneratorParams& p) {
    require(rows >= 3 && cols >= 3, "torus dimensions must be at least 3 to stay simple");
    check_weights(p);
    Rng rng(p.seed);
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<Edge> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            edges.push_back({id(r, c), id(r, (c + 1) % cols), draw_weight(p, rng)});
            edges.push_back({id(r, c), id((r + 1) % rows, c), draw_weight(p, rng)});
        }
    return WeightedGraph::from_edges(rows * cols, std::move(edges));
}

WeightedGraph make_ring(int n, const GeneratorParams& p) {
    require(n >= 3, "ring needs at least 3 vertices");
    check_weights(p);
    Rng rng(p.seed);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, draw_weight(p, rng)});
    return WeightedGraph::from_edges(n, std::move(edges));
}

WeightedGraph make_random_regular(int n, int degree, const GeneratorParams& p) {
    require(degree >= 3, "degree must be at least 3");
    require(degree < n, "degree must be below the vertex count");
    require((std::int64_t(n) * degree) % 2 == 0, "n*degree must be even");
    check_weights(p);

    Rng rng(p.seed);
    std::vector<int> stubs(std::size_t(n) * std::size_t(degree));
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < degree; ++k) stubs[std::size_t(v) * std::size_t(degree) + std::size_t(k)] = v;

    for (int attempt = 0; attempt < 1000; ++attempt) {
        // shuffle stubs, pair them up, reject on loops or doubles
        for (std::size_t i = stubs.size(); i > 1; --i) {
            std::size_t j = std::size_t(rng.next_below(i));
            std::swap(stubs[i - 1], stubs[j]);
        }
        std::unordered_set<std::uint64_t> seen;
        std::vector<Edge> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            std::uint64_t key = (std::uint64_t(std::uint32_t(std::min(u, v))) << 32) |
                                std::uint64_t(std::uint32_t(std::max(u, v)));
            if (!seen.insert(key).second) {
                ok = false;
                break;
            }
            edges.push_back({u, v, 0.0});
        }
        if (!ok) continue;
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return std::pair(std::min(a.u, a.v), std::max(a.u, a.v)) <
                   std::pair(std::min(b.u, b.v), std::max(b.u, b.v));
        });
        for (Edge& e : edges) e.w = draw_weight(p, rng);
        WeightedGraph g = WeightedGraph::from_edges(n, std::move(edges));
        if (g.connected()) return g;
    }
    throw assertion_error("random regular pairing failed to produce a simple connected graph");
}

} // namespace laplax
