#include "laplax/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "laplax/shortest_paths.hpp"

namespace laplax {

namespace {

// Shared shell scan for ball and cone cuts.
RegionCut region_cut(const WeightedGraph& g, std::span<const double> dist,
                     const LengthClasses& lc, double r_min, double r_max, double constant) {
    require(r_min < r_max, "empty radius range");
    int n = g.vertex_count();
    require(int(dist.size()) == n, "distance array size mismatch");
    for (double d : dist) require(std::isfinite(d), "region cut needs finite distances");

    std::vector<int> order(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return dist[std::size_t(a)] < dist[std::size_t(b)]; });

    double m_all = double(g.edge_count());
    std::vector<char> inside(std::size_t(n), 0);
    double cut_cost = 0.0;
    double vol = 0.0;

    auto add_vertex = [&](int v) {
        inside[std::size_t(v)] = 1;
        for (auto [u, eid] : g.neighbors(v)) {
            double c = 1.0 / lc.length(eid);
            if (inside[std::size_t(u)]) {
                cut_cost -= c;  // edge became interior
            } else {
                cut_cost += c;
                vol += 1.0;
            }
        }
    };

    // region at r_min
    std::size_t k = 0;
    while (k < order.size() && dist[std::size_t(order[k])] <= r_min) add_vertex(order[k++]);
    double vol_min = vol;
    double log_term = std::max(1.0, std::log((m_all + 1.0) / (vol_min + 1.0)));
    double scale = constant * log_term / (r_max - r_min);

    auto make_result = [&](double radius, double bound) {
        RegionCut rc;
        rc.cert = {radius, cut_cost, bound, vol, vol_min, r_max - r_min, constant};
        for (int v = 0; v < n; ++v)
            if (inside[std::size_t(v)]) rc.inside.push_back(v);
        return rc;
    };

    for (;;) {
        double radius = k == 0 ? r_min : std::max(r_min, dist[std::size_t(order[k - 1])]);
        double bound = scale * (vol + 1.0);
        if (cut_cost <= bound) return make_result(radius, bound);
        // grow to the next shell strictly below r_max
        ensure(k < order.size() && dist[std::size_t(order[k])] < r_max,
               "region growing exhausted the radius range without a certified cut");
        double next = dist[std::size_t(order[k])];
        while (k < order.size() && dist[std::size_t(order[k])] == next) add_vertex(order[k++]);
    }
}

} // namespace

RegionCut ball_cut(const WeightedGraph& g, std::span<const double> dist, const LengthClasses& lc,
                   double r_min, double r_max, double constant) {
    return region_cut(g, dist, lc, r_min, r_max, constant);
}

RegionCut cone_cut(const WeightedGraph& g, std::span<const double> rho, const LengthClasses& lc,
                   double r_min, double r_max, double constant) {
    return region_cut(g, rho, lc, r_min, r_max, constant);
}

RegionCut cone_cut(const WeightedGraph& g, std::span<const int> apex, const LengthClasses& lc,
                   double r_min, double r_max, double constant) {
    std::vector<double> rho = dijkstra_k_distinct(g, lc, apex);
    return region_cut(g, rho, lc, r_min, r_max, constant);
}

StarPartition star_partition(const WeightedGraph& g, const LengthClasses& lc, int center,
                             double ball_constant, double cone_constant) {
    int n = g.vertex_count();
    require(center >= 0 && center < n, "center out of range");
    require(g.connected(), "star partition needs a connected graph");

    StarPartition sp;
    std::vector<double> dist = dijkstra_k_distinct(g, lc, center);
    double r = 0.0;
    for (double d : dist) r = std::max(r, d);
    sp.graph_radius = r;

    if (n <= 2 || r == 0.0) {
        StarPart whole;
        whole.anchor = center;
        whole.radius = r;
        for (int v = 0; v < n; ++v) whole.vertices.push_back(v);
        sp.parts.push_back(std::move(whole));
        return sp;
    }

    RegionCut ball = ball_cut(g, dist, lc, r / 4.0, r / 2.0, ball_constant);
    std::vector<char> covered(std::size_t(n), 0);
    for (int v : ball.inside) covered[std::size_t(v)] = 1;
    std::vector<char> in_ball = covered;

    StarPart center_part;
    center_part.vertices = ball.inside;
    center_part.anchor = center;
    center_part.radius = ball.cert.radius;
    center_part.cert = ball.cert;
    sp.parts.push_back(std::move(center_part));

    int remaining = n - int(ball.inside.size());
    while (remaining > 0) {
        // anchor: uncovered vertex adjacent to covered territory, preferring
        // ball-adjacent shells, then closest to the center, then lowest id.
        int anchor = -1, bridge_edge = -1, bridge_end = -1;
        bool anchor_on_ball = false;
        for (int v = 0; v < n; ++v) {
            if (covered[std::size_t(v)]) continue;
            int best_edge = -1, best_end = -1;
            bool on_ball = false;
            for (auto [u, eid] : g.neighbors(v)) {
                if (!covered[std::size_t(u)]) continue;
                bool ub = in_ball[std::size_t(u)];
                if (best_edge < 0 || (ub && !on_ball) ||
                    (ub == on_ball &&
                     std::pair(dist[std::size_t(u)], u) < std::pair(dist[std::size_t(best_end)], best_end))) {
                    best_edge = eid;
                    best_end = u;
                    on_ball = ub;
                }
            }
            if (best_edge < 0) continue;
            bool better = anchor < 0 || (on_ball && !anchor_on_ball) ||
                          (on_ball == anchor_on_ball &&
                           std::pair(dist[std::size_t(v)], v) < std::pair(dist[std::size_t(anchor)], anchor));
            if (better) {
                anchor = v;
                bridge_edge = best_edge;
                bridge_end = best_end;
                anchor_on_ball = on_ball;
            }
        }
        ensure(anchor >= 0, "uncovered region with no edge to covered territory");

        // cone grown inside the uncovered subgraph
        std::vector<int> uncovered;
        for (int v = 0; v < n; ++v)
            if (!covered[std::size_t(v)]) uncovered.push_back(v);
        InducedSubgraph sub = g.induced(uncovered);
        LengthClasses sub_lc;
        sub_lc.values = lc.values;
        sub_lc.class_of.resize(sub.edge_of.size());
        for (int i = 0; i < int(sub.edge_of.size()); ++i)
            sub_lc.class_of[std::size_t(i)] = lc.class_of[std::size_t(sub.edge_of[std::size_t(i)])];

        int local_anchor = int(std::lower_bound(uncovered.begin(), uncovered.end(), anchor) -
                               uncovered.begin());
        // cone distances within the anchor's uncovered component; unreached
        // vertices stay outside this cone.
        std::vector<double> rho = dijkstra_k_distinct(sub.graph, sub_lc, local_anchor);
        std::vector<int> comp;
        for (int v = 0; v < sub.graph.vertex_count(); ++v)
            if (std::isfinite(rho[std::size_t(v)])) comp.push_back(v);

        InducedSubgraph cone_host = sub.graph.induced(comp);
        LengthClasses cone_lc;
        cone_lc.values = lc.values;
        cone_lc.class_of.resize(cone_host.edge_of.size());
        for (int i = 0; i < int(cone_host.edge_of.size()); ++i)
            cone_lc.class_of[std::size_t(i)] =
                sub_lc.class_of[std::size_t(cone_host.edge_of[std::size_t(i)])];
        std::vector<double> cone_rho(comp.size());
        for (int i = 0; i < int(comp.size()); ++i)
            cone_rho[std::size_t(i)] = rho[std::size_t(comp[std::size_t(i)])];

        RegionCut cone = [&] {
            double hi = r / 2.0;
            double lo = 0.0;
            // degenerate slice: take the whole component
            double max_rho = 0.0;
            for (double d : cone_rho) max_rho = std::max(max_rho, d);
            if (max_rho < hi) {
                RegionCut all;
                all.cert = {max_rho, 0.0, 0.0, 0.0, 0.0, hi - lo, cone_constant};
                for (int v = 0; v < int(comp.size()); ++v) all.inside.push_back(v);
                return all;
            }
            return cone_cut(cone_host.graph, cone_rho, cone_lc, lo, hi, cone_constant);
        }();

        StarPart part;
        part.anchor = anchor;
        part.bridge_edge = bridge_edge;
        part.bridge_covered_end = bridge_end;
        part.radius = cone.cert.radius;
        part.cert = cone.cert;
        for (int local : cone.inside) {
            int host = sub.vertex_of[std::size_t(cone_host.vertex_of[std::size_t(local)])];
            part.vertices.push_back(host);
            covered[std::size_t(host)] = 1;
        }
        remaining -= int(part.vertices.size());
        sp.parts.push_back(std::move(part));
    }
    return sp;
}

} // namespace laplax
