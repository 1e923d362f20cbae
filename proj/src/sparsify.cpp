#include "laplax/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "laplax/rng.hpp"

namespace laplax {

namespace {

double clamped_log(double t) { return std::max(std::log(t), 1.0); }

// Running compensated prefix sums; monotone for positive terms, so the
// result supports binary search.
std::vector<double> prefix_sums(std::span<const double> xs) {
    std::vector<double> cum(xs.size());
    KahanSum s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(xs[i] >= 0.0, "negative sampling frequency");
        s.add(xs[i]);
        cum[i] = s.value();
    }
    return cum;
}

// Index of the first prefix sum exceeding y.
int pick(std::span<const double> cum, double y) {
    auto it = std::upper_bound(cum.begin(), cum.end(), y);
    if (it == cum.end()) return int(cum.size()) - 1;  // guard the top boundary
    return int(it - cum.begin());
}

long chunk_draws(long total, int chunks, int c) {
    long base = total / chunks;
    long extra = total % chunks;
    return base + (c < extra ? 1 : 0);
}

} // namespace

SampleGraph sample(const WeightedGraph& g, std::span<const double> frequencies, double xi,
                   const SamplerConfig& cfg, SampleStats* stats) {
    cfg.validate();
    require(0.0 < xi && xi < 1.0, "failure parameter must lie in (0,1)");
    require(int(frequencies.size()) == g.edge_count(), "one frequency per edge required");

    std::vector<double> cum = prefix_sums(frequencies);
    double t = cum.empty() ? 0.0 : cum.back();
    require(t > 0.0, "total frequency must be positive");

    SampleStats st;
    st.t = t;
    st.log_t = clamped_log(t);
    st.log_inv_xi = std::log(1.0 / xi);
    st.c_s = cfg.c_s;
    st.q_real = cfg.c_s * t * st.log_t * st.log_inv_xi;
    st.q_draws = long(std::ceil(st.q_real));
    st.seed = cfg.seed;

    SampleGraph out;
    out.n = g.vertex_count();
    out.samples.reserve(std::size_t(st.q_draws));
    Rng root(cfg.seed);
    for (int c = 0; c < cfg.chunks; ++c) {
        Rng rng = cfg.chunks == 1 ? root : root.split(std::uint64_t(c));
        long draws = chunk_draws(st.q_draws, cfg.chunks, c);
        for (long k = 0; k < draws; ++k) {
            double y = rng.next_double() * t;
            int e = pick(cum, y);
            const Edge& ed = g.edge(e);
            double p_e = frequencies[std::size_t(e)] / t;
            out.samples.push_back({ed.u, ed.v, ed.w / (p_e * st.q_real), e});
        }
    }
    if (stats) *stats = st;
    return out;
}

SparsifyResult incremental_sparsify(const WeightedGraph& g, const SpanningTree& t, double kappa,
                                    double xi, const SamplerConfig& cfg) {
    cfg.validate();
    require(kappa > 1.0, "scale factor must exceed 1");
    require(0.0 < xi && xi < 1.0, "failure parameter must lie in (0,1)");
    require(t.vertex_count() == g.vertex_count(), "tree does not span the graph");

    SparsifyResult res;
    res.kappa = kappa;
    res.xi = xi;
    res.stats.seed = cfg.seed;

    StretchReport rep = total_stretch(g, t);
    res.stretch_total = rep.total;
    int n = g.vertex_count();

    auto scaled_tree = [&](double factor) {
        SampleGraph h;
        h.n = n;
        for (int v : t.bfs_order()) {
            if (v == t.root()) continue;
            h.tree_edges.push_back({v, t.parent(v), factor * t.parent_weight(v)});
            h.tree_host_edge_ids.push_back(t.parent_host_edge(v));
        }
        return h;
    };

    if (rep.total <= 1.0) {
        res.tree_branch = true;
        res.h = scaled_tree(2.0);
        return res;
    }

    // frequencies over the tree-scaled graph: 1 per tree edge, stretch/kappa
    // for each off-tree edge
    std::vector<double> off_freq(rep.stretch.size());
    for (std::size_t i = 0; i < rep.stretch.size(); ++i) off_freq[i] = rep.stretch[i] / kappa;
    std::vector<double> cum = prefix_sums(off_freq);
    res.t_hat = cum.empty() ? 0.0 : cum.back();

    SampleStats& st = res.stats;
    st.t = res.t_hat + double(n - 1);
    st.log_t = clamped_log(st.t);
    st.log_inv_xi = std::log(1.0 / xi);
    st.c_s = cfg.c_s;
    st.q_real = cfg.c_s * st.t * st.log_t * st.log_inv_xi;
    st.q_draws = long(std::ceil(st.q_real));
    res.fail_threshold = 2.0 * cfg.c_s * res.t_hat * st.log_t * st.log_inv_xi;

    // One uniform decides tree-vs-off-tree; only off-tree draws materialize.
    double tree_mass = double(n - 1);
    std::vector<Sample> samples;
    Rng root(cfg.seed);
    for (int c = 0; c < cfg.chunks; ++c) {
        Rng rng = cfg.chunks == 1 ? root : root.split(std::uint64_t(c));
        long draws = chunk_draws(st.q_draws, cfg.chunks, c);
        for (long k = 0; k < draws; ++k) {
            double x = rng.next_double() * st.t;
            if (x < tree_mass || cum.empty()) {
                ++res.tree_draws;
                continue;
            }
            int i = pick(cum, x - tree_mass);
            int eid = rep.edge_ids[std::size_t(i)];
            const Edge& ed = g.edge(eid);
            // w_l = w_e / (p_e q) with p_e = (stretch/kappa)/t, then the
            // final uniform x4
            double w_l = ed.w * st.t / (off_freq[std::size_t(i)] * st.q_real);
            samples.push_back({ed.u, ed.v, 4.0 * w_l, eid});
            ++res.off_tree_draws;
        }
    }

    if (double(res.off_tree_draws) > res.fail_threshold) {
        res.failed = true;
        return res;
    }

    res.h = scaled_tree(12.0 * kappa);
    res.h.samples = std::move(samples);
    return res;
}

double expected_sample_stretch(const SparsifyResult& r) {
    if (r.tree_branch || r.failed) return 0.0;
    return 1.0 / (3.0 * r.stats.c_s * r.stats.log_t * r.stats.log_inv_xi);
}

double off_tree_sample_stretch(const SampleGraph& h, double rel_tol) {
    if (h.samples.empty()) return 0.0;
    StretchReport rep = total_stretch(h);
    double lo = rep.stretch[0], hi = rep.stretch[0];
    for (double s : rep.stretch) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (hi - lo > rel_tol * hi) {
        std::ostringstream msg;
        msg << "off-tree sample stretch is not uniform (spread "
            << (hi - lo) / hi << "); offending samples:";
        int listed = 0;
        for (std::size_t i = 0; i < rep.stretch.size() && listed < 8; ++i) {
            if (std::abs(rep.stretch[i] - lo) > rel_tol * hi) {
                msg << " #" << rep.edge_ids[i] << "=" << rep.stretch[i];
                ++listed;
            }
        }
        throw assertion_error(msg.str());
    }
    return rep.stretch[0];
}

} // namespace laplax
