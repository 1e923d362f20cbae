#pragma once

#include <cstdint>

#include "laplax/graph.hpp"

namespace laplax {

// Bracketing estimate of the extreme generalized eigenvalues of the pencil
// (L_H, L_G) on the complement of the all-ones vector, by power iteration
// at both ends with residual-based slack. Non-convergence widens the
// interval and clears `converged`; it is never silent.
struct ConditionEstimate {
    double lo = 0.0;  // <= lambda_min up to the reported slack
    double hi = 0.0;  // >= lambda_max up to the reported slack
    double lambda_min_estimate = 0.0;
    double lambda_max_estimate = 0.0;
    double residual_lo = 0.0;  // generalized eigen-residuals of the final iterates
    double residual_hi = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Both graphs on the same vertex set and connected. Builds pinned dense
// factorizations internally, so it is meant for modest sizes (the checker
// uses it on levels with a few hundred vertices).
ConditionEstimate estimate_relative_condition(const WeightedGraph& g, const WeightedGraph& h,
                                              int iters, std::uint64_t seed = 1);

} // namespace laplax
