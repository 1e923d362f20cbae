#include "laplax/chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "laplax/laplacian.hpp"
#include "laplax/rng.hpp"
#include "laplax/spectral.hpp"
#include "laplax/stretch.hpp"

namespace laplax {

double ChainConfig::kappa_scale(int n) const {
    double ln_n = std::log(double(std::max(n, 3)));
    double ln_ln = std::max(std::log(ln_n), 1.0);
    return std::max(c1 * ln_n * ln_n * ln_ln * ln_ln, 2.0);
}

namespace {

// H_1: the graph itself with its spanning tree scaled up. Off-tree edges
// ride along as single "samples" of themselves.
SampleGraph scale_tree_level(const WeightedGraph& g, const SpanningTree& t, double factor) {
    SampleGraph h;
    h.n = g.vertex_count();
    std::vector<char> in_tree = t.host_membership(g.edge_count());
    for (int v : t.bfs_order()) {
        if (v == t.root()) continue;
        h.tree_edges.push_back({v, t.parent(v), factor * t.parent_weight(v)});
        h.tree_host_edge_ids.push_back(t.parent_host_edge(v));
    }
    for (int id = 0; id < g.edge_count(); ++id) {
        if (in_tree[std::size_t(id)]) continue;
        const Edge& e = g.edge(id);
        h.samples.push_back({e.u, e.v, e.w, id});
    }
    return h;
}

// Spanning tree of flatten(H), located by endpoint pair. Samples are
// off-tree, so no sample merges into a tree pair and the weights match.
SpanningTree flat_tree(const SampleGraph& h, const WeightedGraph& flat) {
    int nt = int(h.tree_edges.size());
    std::vector<int> ids(std::size_t(nt), -1);
    std::vector<std::pair<std::pair<int, int>, int>> pairs;
    pairs.reserve(std::size_t(flat.edge_count()));
    for (int id = 0; id < flat.edge_count(); ++id) {
        const Edge& e = flat.edge(id);
        pairs.push_back({{std::min(e.u, e.v), std::max(e.u, e.v)}, id});
    }
    std::sort(pairs.begin(), pairs.end());
    for (int k = 0; k < nt; ++k) {
        const Edge& te = h.tree_edges[std::size_t(k)];
        std::pair<int, int> key{std::min(te.u, te.v), std::max(te.u, te.v)};
        auto it = std::lower_bound(pairs.begin(), pairs.end(), key,
                                   [](const auto& a, const auto& b) { return a.first < b; });
        ensure(it != pairs.end() && it->first == key, "tree edge lost in flatten");
        ids[std::size_t(k)] = it->second;
    }
    return SpanningTree::from_host_edges(flat, ids, 0);
}

} // namespace

PreconChain build_chain(const WeightedGraph& g, double p, const ChainConfig& cfg) {
    require(g.connected(), "chain construction needs a connected graph");
    require(0.0 < p && p < 1.0, "failure budget must lie in (0,1)");
    require(cfg.kappa_c > 1.0 && cfg.c_stop >= 1 && cfg.retries >= 1, "bad chain configuration");

    PreconChain chain;
    chain.config = cfg;
    int n1 = g.vertex_count();

    if (n1 <= cfg.c_stop) {
        chain.g_terminal = g;
        chain.mu = {std::max(1.0, double(g.edge_count()))};
        return chain;
    }

    Rng root_rng(cfg.seed);
    double xi = std::clamp(p / (2.0 * std::log(double(n1))), 1e-9, 0.49);
    int depth_cap = std::max(4, 2 * int(std::ceil(std::log2(double(n1)))) + 2);

    LsstOptions lsst_opt;
    lsst_opt.seed = root_rng.split(0xf00d).next_u64();
    SpanningTree tree = low_stretch_tree(g, lsst_opt);

    // level 1: scaled tree, no sampling
    {
        ChainLevel lvl;
        lvl.g = g;
        lvl.t = tree;
        lvl.kappa = cfg.kappa_scale(n1);
        lvl.kappa_bound = lvl.kappa;
        lvl.stretch_total = total_stretch(g, tree).total;
        lvl.h = scale_tree_level(g, tree, lvl.kappa);
        lvl.off_tree_samples = long(lvl.h.samples.size());
        lvl.h_flat = lvl.h.flatten();
        SpanningTree th = flat_tree(lvl.h, lvl.h_flat);
        EliminationResult er = greedy_elimination(lvl.h_flat, th);
        lvl.rec = std::move(er.record);
        chain.kappas.push_back(lvl.kappa);
        chain.levels.push_back(std::move(lvl));
        chain.g_terminal = std::move(er.g_hat);
        tree = std::move(er.t_hat);
    }

    while (chain.g_terminal.vertex_count() > cfg.c_stop) {
        ensure(chain.depth() <= depth_cap, "chain depth exceeded 2 log n; sparsifier stalled");
        int level_index = chain.depth();  // the level being created

        ChainLevel lvl;
        lvl.g = std::move(chain.g_terminal);
        lvl.t = std::move(tree);

        SamplerConfig scfg;
        scfg.c_s = cfg.c_s;
        // The overrun check rejects runs with more than twice the expected
        // number of off-tree draws. In the sliver of stretch just above the
        // doubled-tree branch the full kappa_c scale pushes that expectation
        // below 1 and rejection fires with constant probability, so the
        // scale is capped to keep the expectation at least 1. The spectral
        // bound only tightens under a smaller scale.
        constexpr double kExpectedDrawFloor = 1.0;
        double stretch_here = total_stretch(lvl.g, lvl.t).total;
        double kappa_level = cfg.kappa_c;
        if (stretch_here > 1.0) {
            double ln_n = std::log(double(std::max(lvl.g.vertex_count(), 3)));
            double per_unit = cfg.c_s * ln_n * std::log(1.0 / xi);
            kappa_level = std::min(
                cfg.kappa_c,
                std::max(stretch_here * per_unit / kExpectedDrawFloor, 1.000001));
        }
        SparsifyResult got;
        Rng level_rng = root_rng.split(std::uint64_t(level_index));
        for (int attempt = 0; attempt < cfg.retries; ++attempt) {
            scfg.seed = level_rng.split(std::uint64_t(attempt)).next_u64();
            got = incremental_sparsify(lvl.g, lvl.t, kappa_level, xi, scfg);
            lvl.sparsify_attempts = attempt + 1;
            if (!got.failed) break;
        }
        if (got.failed) {
            std::ostringstream msg;
            msg << "incremental sparsification failed " << cfg.retries
                << " times at level " << level_index << " (n=" << lvl.g.vertex_count()
                << ", threshold=" << got.fail_threshold
                << ", draws=" << got.off_tree_draws
                << "); repeated failure at polynomially small odds points at a bug";
            throw assertion_error(msg.str());
        }

        lvl.sparsify_seed = got.stats.seed;
        lvl.tree_branch = got.tree_branch;
        lvl.stretch_total = got.stretch_total;
        lvl.off_tree_samples = long(got.h.samples.size());
        lvl.kappa = cfg.kappa_c;
        // Spectral bound for the sampled pair: the output is 4L + 12*kappa*T
        // with L below (3/2)G' and the scaled tree below 12*kappa*G, which
        // sandwiches G <= H <= 18*kappa*G under the sampler's success
        // events (the coarser published route gives 54*kappa).
        lvl.kappa_bound = got.tree_branch ? 2.0 : 18.0 * got.kappa;
        lvl.h = std::move(got.h);
        lvl.h_flat = lvl.h.flatten();
        SpanningTree th = flat_tree(lvl.h, lvl.h_flat);
        EliminationResult er = greedy_elimination(lvl.h_flat, th);
        lvl.rec = std::move(er.record);

        chain.kappas.push_back(lvl.kappa);
        chain.levels.push_back(std::move(lvl));
        chain.g_terminal = std::move(er.g_hat);
        tree = std::move(er.t_hat);
    }

    // witnesses, tightest-from-the-bottom: mu_d covers the terminal graph,
    // each higher one satisfies the reduction-ratio floor, mu_1 pins to m.
    int d = chain.depth();
    chain.mu.assign(std::size_t(d), 0.0);
    chain.mu[std::size_t(d - 1)] = std::max(1.0, double(chain.g_terminal.edge_count()));
    for (int i = d - 1; i >= 2; --i) {
        double ratio = std::ceil(cfg.c_r * std::sqrt(chain.kappas[std::size_t(i - 1)]));
        double floor_i = chain.mu[std::size_t(i)] * ratio;
        chain.mu[std::size_t(i - 1)] =
            std::max(double(chain.levels[std::size_t(i - 1)].g.edge_count()), floor_i);
    }
    chain.mu[0] = std::max(double(g.edge_count()), chain.mu.size() > 1 ? chain.mu[1] : 1.0);
    return chain;
}

ChainCheck verify_chain(const PreconChain& chain, int spectral_cap, int spectral_iters,
                        int quad_samples, std::uint64_t seed) {
    ChainCheck chk;
    auto add = [&](int id, bool pass, std::string detail) {
        chk.items.push_back({id, pass, std::move(detail)});
    };
    int d = chain.depth();
    Rng rng(seed);

    // 1: spectral sandwich G_i <= H_i <= bound_i G_i
    {
        bool ok = true;
        std::ostringstream detail;
        for (int i = 1; i < d; ++i) {
            const ChainLevel& lvl = chain.levels[std::size_t(i - 1)];
            double bound = lvl.kappa_bound;
            if (lvl.g.vertex_count() <= spectral_cap) {
                ConditionEstimate est = estimate_relative_condition(
                    lvl.g, lvl.h_flat, spectral_iters, rng.next_u64());
                bool pass = est.lambda_min_estimate >= 1.0 - 1e-6 &&
                            est.lambda_max_estimate <= bound * (1.0 + 1e-6);
                detail << "level " << i << ": pencil [" << est.lambda_min_estimate << ","
                       << est.lambda_max_estimate << "] vs bound " << bound
                       << (pass ? " ok; " : " VIOLATED; ");
                ok = ok && pass;
            } else {
                // spot check: necessary conditions on random directions
                bool pass = true;
                std::vector<double> x(std::size_t(lvl.g.vertex_count()));
                for (int s = 0; s < quad_samples; ++s) {
                    for (double& xi_ : x) xi_ = rng.next_in(-1.0, 1.0);
                    project_mean_zero(x);
                    double qg = quadratic_form(lvl.g, x);
                    double qh = quadratic_form(lvl.h_flat, x);
                    if (qh < qg * (1.0 - 1e-9) || qh > bound * qg * (1.0 + 1e-9)) pass = false;
                }
                detail << "level " << i << ": " << quad_samples << " random quadratic forms"
                       << (pass ? " ok; " : " VIOLATED; ");
                ok = ok && pass;
            }
        }
        add(1, ok, detail.str());
    }

    // 2: the next graph is exactly the eliminated previous one, and the tree
    // image survives with identical weights
    {
        bool ok = true;
        std::ostringstream detail;
        for (int i = 1; i < d; ++i) {
            const ChainLevel& lvl = chain.levels[std::size_t(i - 1)];
            const WeightedGraph& next = chain.graph_at(i + 1);
            WeightedGraph re = lvl.rec.replay(lvl.h_flat);
            bool pass = re.vertex_count() == next.vertex_count() &&
                        re.edge_count() == next.edge_count();
            if (pass) {
                for (int e = 0; e < re.edge_count() && pass; ++e) {
                    const Edge& a = re.edge(e);
                    const Edge& b = next.edge(e);
                    pass = a.u == b.u && a.v == b.v &&
                           std::abs(a.w - b.w) <= 1e-12 * std::max(std::abs(a.w), 1.0);
                }
            }
            if (!pass) {
                detail << "level " << i << ": replay mismatch; ";
                ok = false;
            }
            if (i < d - 1) {
                const SpanningTree& tn = chain.levels[std::size_t(i)].t;
                for (int v : tn.bfs_order()) {
                    if (v == tn.root()) continue;
                    int he = tn.parent_host_edge(v);
                    const Edge& ge = next.edge(he);
                    if (ge.w != tn.parent_weight(v)) {
                        ok = false;
                        detail << "level " << i + 1 << ": tree weight drifted; ";
                        break;
                    }
                }
            }
        }
        if (ok) detail << "replay and tree image consistent";
        add(2, ok, detail.str());
    }

    // 3: mu_i covers the edge count of G_i
    {
        bool ok = true;
        std::ostringstream detail;
        for (int i = 1; i <= d; ++i) {
            double m_i = double(chain.graph_at(i).edge_count());
            if (chain.mu[std::size_t(i - 1)] < m_i) {
                ok = false;
                detail << "mu_" << i << "=" << chain.mu[std::size_t(i - 1)] << " < m_i=" << m_i
                       << "; ";
            }
        }
        if (ok) detail << "all witnesses cover their levels";
        add(3, ok, detail.str());
    }

    // 4: mu_1, mu_2 <= m
    {
        double m = double(chain.graph_at(1).edge_count());
        bool ok = chain.mu[0] <= m && (d < 2 || chain.mu[1] <= m);
        std::ostringstream detail;
        detail << "mu_1=" << chain.mu[0];
        if (d >= 2) detail << ", mu_2=" << chain.mu[1];
        detail << " vs m=" << m;
        add(4, ok, detail.str());
    }

    // 5: geometric decay of the witnesses below level 1
    {
        bool ok = true;
        std::ostringstream detail;
        for (int i = 2; i < d; ++i) {
            double need = std::ceil(chain.config.c_r * std::sqrt(chain.kappas[std::size_t(i - 1)]));
            double ratio = chain.mu[std::size_t(i - 1)] / chain.mu[std::size_t(i)];
            chk.mu_ratios.push_back(ratio);
            if (ratio < need) {
                ok = false;
                detail << "mu_" << i << "/mu_" << i + 1 << "=" << ratio << " < " << need << "; ";
            }
        }
        if (ok) detail << "ratios meet ceil(c_r sqrt(kappa))";
        add(5, ok, detail.str());
    }

    // 6: kappas non-increasing
    {
        bool ok = true;
        for (std::size_t i = 1; i < chain.kappas.size(); ++i)
            ok = ok && chain.kappas[i - 1] >= chain.kappas[i];
        add(6, ok, ok ? "kappa list non-increasing" : "kappa list increases");
    }

    // 7: terminal witness below the fixed constant
    {
        double limit = chain.config.resolved_mu_d_limit();
        bool ok = chain.mu[std::size_t(d - 1)] < limit;
        std::ostringstream detail;
        detail << "mu_d=" << chain.mu[std::size_t(d - 1)] << " vs limit " << limit;
        add(7, ok, detail.str());
    }

    chk.all_pass = true;
    for (const auto& item : chk.items) chk.all_pass = chk.all_pass && item.pass;
    return chk;
}

// ---------------------------------------------------------------------------
// binary container (native endianness)

namespace {

constexpr char kMagic[8] = {'L', 'P', 'X', 'C', 'H', 'A', 'I', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    require(bool(in), "chain file truncated");
    return v;
}

void put_graph(std::ostream& out, const WeightedGraph& g) {
    put<std::int64_t>(out, g.vertex_count());
    put<std::int64_t>(out, g.edge_count());
    for (const Edge& e : g.edges()) {
        put<std::int32_t>(out, e.u);
        put<std::int32_t>(out, e.v);
        put<double>(out, e.w);
    }
}

WeightedGraph get_graph(std::istream& in) {
    auto n = get<std::int64_t>(in);
    auto m = get<std::int64_t>(in);
    std::vector<Edge> es;
    es.reserve(std::size_t(m));
    for (std::int64_t i = 0; i < m; ++i) {
        int u = get<std::int32_t>(in);
        int v = get<std::int32_t>(in);
        double w = get<double>(in);
        es.push_back({u, v, w});
    }
    return WeightedGraph::from_edges(int(n), std::move(es));
}

void put_tree(std::ostream& out, const SpanningTree& t) {
    put<std::int64_t>(out, t.vertex_count());
    put<std::int32_t>(out, t.root());
    for (int v : t.bfs_order()) {
        if (v == t.root()) continue;
        put<std::int32_t>(out, v);
        put<std::int32_t>(out, t.parent(v));
        put<double>(out, t.parent_weight(v));
        put<std::int32_t>(out, t.parent_host_edge(v));
    }
}

SpanningTree get_tree(std::istream& in) {
    auto n = get<std::int64_t>(in);
    int root = get<std::int32_t>(in);
    std::vector<Edge> es;
    std::vector<int> host;
    for (std::int64_t i = 0; i + 1 < n; ++i) {
        int v = get<std::int32_t>(in);
        int p = get<std::int32_t>(in);
        double w = get<double>(in);
        int he = get<std::int32_t>(in);
        es.push_back({v, p, w});
        host.push_back(he);
    }
    return SpanningTree::from_edges(int(n), es, root, host);
}

} // namespace

void write_chain_file(const std::string& path, const PreconChain& chain) {
    std::ofstream out(path, std::ios::binary);
    require(bool(out), "cannot open " + path + " for writing");
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kVersion);
    put<double>(out, chain.config.c1);
    put<double>(out, chain.config.kappa_c);
    put<double>(out, chain.config.c_s);
    put<std::int32_t>(out, chain.config.c_stop);
    put<std::int32_t>(out, chain.config.retries);
    put<double>(out, chain.config.c_r);
    put<std::uint64_t>(out, chain.config.seed);
    put<double>(out, chain.config.mu_d_limit);

    put<std::int32_t>(out, int(chain.levels.size()));
    for (const ChainLevel& lvl : chain.levels) {
        put_graph(out, lvl.g);
        put<std::int64_t>(out, lvl.h.n);
        put<std::int64_t>(out, std::int64_t(lvl.h.tree_edges.size()));
        for (std::size_t k = 0; k < lvl.h.tree_edges.size(); ++k) {
            const Edge& e = lvl.h.tree_edges[k];
            put<std::int32_t>(out, e.u);
            put<std::int32_t>(out, e.v);
            put<double>(out, e.w);
            put<std::int32_t>(out, lvl.h.tree_host_edge_ids.empty()
                                       ? -1
                                       : lvl.h.tree_host_edge_ids[k]);
        }
        put<std::int64_t>(out, std::int64_t(lvl.h.samples.size()));
        for (const Sample& s : lvl.h.samples) {
            put<std::int32_t>(out, s.u);
            put<std::int32_t>(out, s.v);
            put<double>(out, s.w);
            put<std::int32_t>(out, s.parent_edge);
        }
        put_tree(out, lvl.t);
        put<std::int64_t>(out, lvl.rec.n_before);
        put<std::int64_t>(out, std::int64_t(lvl.rec.steps.size()));
        for (const ElimStep& st : lvl.rec.steps) {
            put<std::uint8_t>(out, st.kind == ElimStep::Kind::Degree1 ? 1 : 2);
            put<std::int32_t>(out, st.v);
            put<std::int32_t>(out, st.u1);
            put<std::int32_t>(out, st.u2);
            put<double>(out, st.w1);
            put<double>(out, st.w2);
            put<double>(out, st.w_prior);
            put<std::uint8_t>(out, st.merged_in_tree ? 1 : 0);
        }
        put<double>(out, lvl.kappa);
        put<double>(out, lvl.kappa_bound);
        put<double>(out, lvl.stretch_total);
        put<std::int64_t>(out, lvl.off_tree_samples);
        put<std::uint64_t>(out, lvl.sparsify_seed);
        put<std::int32_t>(out, lvl.sparsify_attempts);
        put<std::uint8_t>(out, lvl.tree_branch ? 1 : 0);
    }
    put_graph(out, chain.g_terminal);
    put<std::int32_t>(out, int(chain.mu.size()));
    for (double m : chain.mu) put<double>(out, m);
    put<std::int32_t>(out, int(chain.kappas.size()));
    for (double k : chain.kappas) put<double>(out, k);
    require(bool(out), "write failed for " + path);
}

PreconChain read_chain_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(bool(in), "cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    require(bool(in) && std::memcmp(magic, kMagic, sizeof kMagic) == 0,
            path + ": not a chain file");
    auto version = get<std::uint32_t>(in);
    require(version == kVersion, path + ": unsupported chain file version");

    PreconChain chain;
    chain.config.c1 = get<double>(in);
    chain.config.kappa_c = get<double>(in);
    chain.config.c_s = get<double>(in);
    chain.config.c_stop = get<std::int32_t>(in);
    chain.config.retries = get<std::int32_t>(in);
    chain.config.c_r = get<double>(in);
    chain.config.seed = get<std::uint64_t>(in);
    chain.config.mu_d_limit = get<double>(in);

    int nlevels = get<std::int32_t>(in);
    for (int i = 0; i < nlevels; ++i) {
        ChainLevel lvl;
        lvl.g = get_graph(in);
        lvl.h.n = int(get<std::int64_t>(in));
        auto nt = get<std::int64_t>(in);
        for (std::int64_t k = 0; k < nt; ++k) {
            int u = get<std::int32_t>(in);
            int v = get<std::int32_t>(in);
            double w = get<double>(in);
            int he = get<std::int32_t>(in);
            lvl.h.tree_edges.push_back({u, v, w});
            lvl.h.tree_host_edge_ids.push_back(he);
        }
        auto ns = get<std::int64_t>(in);
        for (std::int64_t k = 0; k < ns; ++k) {
            int u = get<std::int32_t>(in);
            int v = get<std::int32_t>(in);
            double w = get<double>(in);
            int pe = get<std::int32_t>(in);
            lvl.h.samples.push_back({u, v, w, pe});
        }
        lvl.t = get_tree(in);
        lvl.rec.n_before = int(get<std::int64_t>(in));
        auto nsteps = get<std::int64_t>(in);
        for (std::int64_t k = 0; k < nsteps; ++k) {
            ElimStep st;
            st.kind = get<std::uint8_t>(in) == 1 ? ElimStep::Kind::Degree1 : ElimStep::Kind::Degree2;
            st.v = get<std::int32_t>(in);
            st.u1 = get<std::int32_t>(in);
            st.u2 = get<std::int32_t>(in);
            st.w1 = get<double>(in);
            st.w2 = get<double>(in);
            st.w_prior = get<double>(in);
            st.merged_in_tree = get<std::uint8_t>(in) != 0;
            lvl.rec.steps.push_back(st);
        }
        // relabeling rebuilt from the steps
        lvl.rec.keep_map.assign(std::size_t(lvl.rec.n_before), -2);
        for (const ElimStep& st : lvl.rec.steps) lvl.rec.keep_map[std::size_t(st.v)] = -1;
        for (int v = 0; v < lvl.rec.n_before; ++v) {
            if (lvl.rec.keep_map[std::size_t(v)] == -2) {
                lvl.rec.keep_map[std::size_t(v)] = int(lvl.rec.kept_ids.size());
                lvl.rec.kept_ids.push_back(v);
            }
        }
        lvl.h_flat = lvl.h.flatten();
        lvl.kappa = get<double>(in);
        lvl.kappa_bound = get<double>(in);
        lvl.stretch_total = get<double>(in);
        lvl.off_tree_samples = get<std::int64_t>(in);
        lvl.sparsify_seed = get<std::uint64_t>(in);
        lvl.sparsify_attempts = get<std::int32_t>(in);
        lvl.tree_branch = get<std::uint8_t>(in) != 0;
        chain.levels.push_back(std::move(lvl));
    }
    chain.g_terminal = get_graph(in);
    int nmu = get<std::int32_t>(in);
    for (int i = 0; i < nmu; ++i) chain.mu.push_back(get<double>(in));
    int nk = get<std::int32_t>(in);
    for (int i = 0; i < nk; ++i) chain.kappas.push_back(get<double>(in));
    return chain;
}

} // namespace laplax
