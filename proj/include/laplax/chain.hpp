#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "laplax/elimination.hpp"
#include "laplax/graph.hpp"
#include "laplax/lsst.hpp"
#include "laplax/sparsify.hpp"

namespace laplax {

struct ChainConfig {
    double c1 = 27.0;        // level-1 tree scale constant: c1 * ln^2 n * (ln ln n)^2
    double kappa_c = 200.0;  // per-level condition target below level 1
    double c_s = 4.0;        // sampler oversampling constant
    int c_stop = 100;        // stop once a level has at most this many vertices
    int retries = 5;         // sparsifier retry budget per level
    double c_r = 3.0;        // reduction/iteration coupling constant
    std::uint64_t seed = 1;
    // Ceiling for the terminal witness; 0 derives c_stop*(c_stop-1)/2 + 1,
    // the densest graph the stop rule can leave behind.
    double mu_d_limit = 0.0;

    double resolved_mu_d_limit() const {
        return mu_d_limit > 0.0 ? mu_d_limit
                                : double(c_stop) * double(c_stop - 1) / 2.0 + 1.0;
    }
    double kappa_scale(int n) const;  // the level-1 scale for an n-vertex graph
};

// One (G_i, H_i) level plus the elimination taking H_i to the next graph.
struct ChainLevel {
    WeightedGraph g;                  // G_i
    SampleGraph h;                    // H_i
    WeightedGraph h_flat;             // flatten(H_i)
    SpanningTree t;                   // T_i spanning g
    EliminationRecord rec;            // flatten(H_i) -> G_{i+1}
    double kappa = 0.0;               // nominal condition entry in K
    // Guaranteed spectral bound for (G_i, H_i): the level-1 scale,
    // 18x the sparsifier scale actually used, or 2 on the doubled-tree
    // branch.
    double kappa_bound = 0.0;
    double stretch_total = 0.0;       // off-tree stretch of G_i by T_i
    long off_tree_samples = 0;        // |L_i|
    std::uint64_t sparsify_seed = 0;  // seed of the accepted attempt
    int sparsify_attempts = 0;
    bool tree_branch = false;
};

struct PreconChain {
    std::vector<ChainLevel> levels;  // levels 1..d-1
    WeightedGraph g_terminal;        // G_d
    std::vector<double> mu;          // witnesses, mu[0] = mu_1 .. mu[d-1] = mu_d
    std::vector<double> kappas;      // K = kappa_1 .. kappa_{d-1}
    ChainConfig config;

    int depth() const { return int(levels.size()) + 1; }
    const WeightedGraph& graph_at(int level) const {  // level in 1..d
        return level <= int(levels.size()) ? levels[std::size_t(level - 1)].g : g_terminal;
    }
};

// Builds the chain for a connected graph: a low-stretch tree scaled up at
// level 1, then alternating incremental sparsification (constant kappa_c)
// and greedy elimination, reusing the image of the one tree all the way
// down. p is the overall failure budget; each level's sparsifier runs with
// failure parameter p / (2 ln n) and retries on FAIL with derived seeds.
PreconChain build_chain(const WeightedGraph& g, double p, const ChainConfig& cfg);

// Re-derivation of the good-chain conditions with stored witnesses.
struct ChainCheck {
    struct Item {
        int id = 0;
        bool pass = false;
        std::string detail;
    };
    std::vector<Item> items;
    bool all_pass = false;
    std::vector<double> mu_ratios;  // measured mu_i / mu_{i+1}
};

// `spectral_cap`: levels no larger than this get a pencil power-iteration
// check of the spectral sandwich; larger levels are spot-checked with
// random quadratic forms.
ChainCheck verify_chain(const PreconChain& chain, int spectral_cap = 200,
                        int spectral_iters = 400, int quad_samples = 32,
                        std::uint64_t seed = 7);

// Versioned binary container so a built chain can be reused across runs.
void write_chain_file(const std::string& path, const PreconChain& chain);
PreconChain read_chain_file(const std::string& path);

} // namespace laplax
