#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "laplax/chain.hpp"
#include "laplax/dense.hpp"
#include "laplax/sdd.hpp"

namespace laplax {

struct SolveOptions {
    double eps = 1e-8;      // target relative A-norm error
    int max_outer = 0;      // hard cap on outer iterations; 0 = 3x plan + 50
    double c_r = 3.0;       // inner iteration floor: ceil(c_r sqrt(kappa_i))
    // Per-sweep contraction each level must deliver; inner iteration counts
    // rise above the floor when the level's interval needs more.
    double inner_contraction = 0.5;
    bool residual_history = false;
    std::uint64_t seed = 1;

    void validate() const {
        require(0.0 < eps && eps < 1.0, "eps must lie in (0,1)");
        require(c_r > 0.0, "c_r must be positive");
        require(0.0 < inner_contraction && inner_contraction < 1.0,
                "inner contraction must lie in (0,1)");
    }
};

struct SolveReport {
    double rel_residual = -1.0;  // ||b - A x||_2 / ||b||_2 at exit
    int outer_iterations = 0;
    int planned_iterations = 0;  // Chebyshev count from the contraction bound
    bool converged = false;
    double eps = 0.0;
    std::uint64_t edge_touches = 0;
    double projection_magnitude = 0.0;  // removed kernel component of b
    std::vector<double> residual_history;
    std::uint64_t seed = 0;
    int chain_depth = 0;
    double build_ms = 0.0;
    double solve_ms = 0.0;
};

// Mean-centered exact solve of a small connected Laplacian (pinned dense
// factorization); b must sum to zero.
std::vector<double> direct_solve(const WeightedGraph& g, std::span<const double> b);

// Recursive preconditioned Chebyshev over one chain (one connected graph).
// The level-i preconditioner solves H_i by exact elimination onto G_{i+1}
// and a fixed-length Chebyshev sweep there, bottoming out in a dense solve.
//
// Each level's iteration interval is the pencil bound stored on the chain,
// widened by the contraction the level below actually guarantees; the
// widening factors are propagated bottom-up at construction, so the true
// preconditioned spectrum stays inside every interval and the planned
// outer count certifies the A-norm error bound.
class ChainSolver {
public:
    ChainSolver(const PreconChain& chain, const SolveOptions& opt);

    // L_{G_1} x = b with b summing to zero; returns the mean-centered x.
    std::vector<double> solve(std::span<const double> b, SolveReport* rep = nullptr) const;

    // Chebyshev at a given level (1-based) for a fixed iteration count;
    // exposed for the V-cycle preconditioner and diagnostics.
    std::vector<double> chebyshev_at_level(int level, std::span<const double> b, int iters,
                                           WorkCounter* wc = nullptr) const;

    // One preconditioner application at `level` (the V-cycle entry).
    std::vector<double> apply_preconditioner(int level, std::span<const double> r,
                                             WorkCounter* wc = nullptr) const;

    std::pair<double, double> level_interval(int level) const {
        return intervals_[std::size_t(level - 1)];
    }
    int inner_iterations(int level) const { return inner_iters_[std::size_t(level - 1)]; }
    const PreconChain& chain() const { return *chain_; }

private:
    const PreconChain* chain_;
    SolveOptions opt_;
    PinnedLaplacianSolver base_;
    std::vector<std::pair<double, double>> intervals_;  // per level 1..d-1
    std::vector<int> inner_iters_;                      // per level, same indexing
    std::vector<double> deltas_;                        // per-sweep contraction bound
};

// End-to-end solver: SDD reduction, per-component chains, recursive
// preconditioned Chebyshev, and back-mapping. For singular components the
// rhs is projected onto the range and the report notes the magnitude.
struct SddSolveResult {
    std::vector<double> x;
    SolveReport report;
};

SddSolveResult solve(const SddMatrix& a, std::span<const double> b, const SolveOptions& opt,
                     const ChainConfig& chain_cfg = {});

// Same pipeline for an explicit Laplacian system (graph + optional
// nonnegative diagonal addition).
SddSolveResult solve_laplacian(const WeightedGraph& g, std::span<const double> excess_diag,
                               std::span<const double> b, const SolveOptions& opt,
                               const ChainConfig& chain_cfg = {},
                               const PreconChain* prebuilt = nullptr);

enum class PcgPreconditioner { None, Jacobi, Chain };

// Textbook preconditioned conjugate gradient on the reduced system; the
// chain variant applies one V-cycle of the level-1 preconditioner per
// iteration. Benchmark comparator.
SddSolveResult pcg_baseline(const SddMatrix& a, std::span<const double> b,
                            PcgPreconditioner kind, double eps,
                            const ChainConfig& chain_cfg = {}, int max_iters = 0);

} // namespace laplax
