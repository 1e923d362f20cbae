#pragma once

#include <span>
#include <vector>

#include "laplax/graph.hpp"
#include "laplax/rounding.hpp"

namespace laplax {

// Region-growing cut certificate. The search scans shells outward and stops
// at the first radius where
//
//   cut_cost <= C * (vol + 1) * max(1, ln((m+1)/(vol_min+1))) / (r_max - r_min)
//
// with cut_cost the sum of reciprocal lengths over boundary edges and vol
// the number of edges incident to the region. The standard growth argument
// guarantees such a radius exists in [r_min, r_max).
struct CutCertificate {
    double radius = 0.0;
    double cut_cost = 0.0;
    double bound = 0.0;     // right-hand side evaluated at the chosen radius
    double vol = 0.0;       // edges incident to the chosen region
    double vol_min = 0.0;   // edges incident to the r_min region
    double range = 0.0;     // r_max - r_min
    double constant = 0.0;  // the C used
    bool holds() const { return cut_cost <= bound; }
};

struct RegionCut {
    std::vector<int> inside;  // vertex ids, ascending
    CutCertificate cert;
};

// Ball around the distance origin: region = {v : dist[v] <= r}. All
// distances must be finite (run per connected piece).
RegionCut ball_cut(const WeightedGraph& g, std::span<const double> dist,
                   const LengthClasses& lc, double r_min, double r_max,
                   double constant = 2.0);

// Same certificate over a cone distance rho (multi-source distances from an
// apex set); provided for symmetry and for direct certificate tests.
RegionCut cone_cut(const WeightedGraph& g, std::span<const double> rho,
                   const LengthClasses& lc, double r_min, double r_max,
                   double constant = 2.0);

// Cone distances computed internally from the apex set.
RegionCut cone_cut(const WeightedGraph& g, std::span<const int> apex,
                   const LengthClasses& lc, double r_min, double r_max,
                   double constant = 2.0);

// Star-shaped partition: part 0 is a ball around the center, the remaining
// parts are cones grown from anchor vertices adjacent to already-covered
// territory. Bridge edges hang each cone's anchor off the covered side.
// Every part's internal radius from its anchor stays below 2/3 of the
// graph radius (in the supplied lengths).
struct StarPart {
    std::vector<int> vertices;  // host vertex ids
    int anchor = -1;            // host vertex id (center for part 0)
    int bridge_edge = -1;       // host edge id, -1 for part 0
    int bridge_covered_end = -1;
    double radius = 0.0;        // cut radius certified for this part
    CutCertificate cert;
};

struct StarPartition {
    std::vector<StarPart> parts;
    double graph_radius = 0.0;
};

StarPartition star_partition(const WeightedGraph& g, const LengthClasses& lc, int center,
                             double ball_constant = 2.0, double cone_constant = 2.0);

} // namespace laplax
