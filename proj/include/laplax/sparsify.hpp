#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "laplax/graph.hpp"
#include "laplax/stretch.hpp"

namespace laplax {

struct SamplerConfig {
    double c_s = 4.0;        // oversampling constant, must be >= 2
    std::uint64_t seed = 1;  // recorded with every stochastic output
    int chunks = 1;          // draw streams concatenated in order; 1 = bit-stable default

    void validate() const {
        require(c_s >= 2.0, "oversampling constant must be at least 2");
        require(chunks >= 1, "chunk count must be positive");
    }
};

// Bookkeeping from a sampling run, enough to replay and to evaluate the
// closed-form per-sample stretch.
struct SampleStats {
    double t = 0.0;        // sum of frequencies
    double log_t = 0.0;    // ln t clamped below at 1
    double log_inv_xi = 0.0;
    double c_s = 0.0;
    double q_real = 0.0;   // c_s * t * log t * log(1/xi); weights divide by this
    long q_draws = 0;      // ceil(q_real) draws actually taken
    std::uint64_t seed = 0;
};

// Draws ceil(q) weighted edge copies with probabilities proportional to the
// given frequencies; each sample of edge e weighs w_e/(p_e q), so the
// reconstructed edge weights are unbiased up to the ceil(q)/q factor.
SampleGraph sample(const WeightedGraph& g, std::span<const double> frequencies, double xi,
                   const SamplerConfig& cfg, SampleStats* stats = nullptr);

struct SparsifyResult {
    bool failed = false;     // off-tree sample count overran the threshold
    bool tree_branch = false;  // total stretch was <= 1; H is the doubled tree
    SampleGraph h;           // valid when !failed

    double stretch_total = 0.0;  // off-tree stretch of G by T before scaling
    double t_hat = 0.0;          // stretch_total / kappa
    SampleStats stats;
    long off_tree_draws = 0;
    long tree_draws = 0;
    double fail_threshold = 0.0;  // 2 c_s t_hat log t log(1/xi)
    double kappa = 0.0;
    double xi = 0.0;
};

// Keeps a rescaled copy of the spanning tree and samples off-tree edges with
// frequencies equal to their stretch over the scaled tree. Tree-edge draws
// are counted but never materialized; the output tree is the input tree
// scaled by 12*kappa (or by 2 when the total stretch is already <= 1).
// Returns failed=true instead of a graph when the off-tree draw count
// exceeds twice its expectation; callers retry with a fresh seed.
SparsifyResult incremental_sparsify(const WeightedGraph& g, const SpanningTree& t, double kappa,
                                    double xi, const SamplerConfig& cfg);

// The closed-form stretch every off-tree sample of a sparsified graph has
// with respect to the output tree: 1 / (3 c_s log t log(1/xi)).
double expected_sample_stretch(const SparsifyResult& r);

// Recomputes the stretch of every off-tree sample of `h` against its own
// tree, checks they agree to `rel_tol`, and returns the common value.
// Non-uniform stretch is a correctness tripwire and throws with the
// offending sample ids. Returns 0 for sample-free graphs.
double off_tree_sample_stretch(const SampleGraph& h, double rel_tol = 1e-9);

} // namespace laplax
