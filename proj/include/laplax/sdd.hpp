#pragma once

#include <span>
#include <tuple>
#include <vector>

#include "laplax/graph.hpp"

namespace laplax {

// Symmetric diagonally dominant matrix in compressed-row form. Entries are
// kept exactly symmetric (both triangles stored); validation rejects
// asymmetry with the offending index pair and non-dominant rows by row id.
class SddMatrix {
public:
    SddMatrix() = default;

    // Triplets may list either one or both triangles; off-diagonal entries
    // given once are mirrored. Duplicate positions are rejected.
    static SddMatrix from_triplets(int n, std::vector<std::tuple<int, int, double>> entries);

    int dim() const { return n_; }
    int nonzeros() const { return int(col_.size()); }

    double at(int i, int j) const;
    std::vector<double> apply(std::span<const double> x) const;

    // Row i as (col, value) pairs, ascending by column.
    std::span<const int> row_cols(int i) const;
    std::span<const double> row_vals(int i) const;

    bool has_positive_offdiagonal() const;

    // Per-row diagonal excess A_ii - sum|A_ij|.
    std::vector<double> diagonal_excess() const;

private:
    void validate() const;

    int n_ = 0;
    std::vector<int> row_off_;
    std::vector<int> col_;
    std::vector<double> val_;
};

// Result of reducing an SDD system to a Laplacian-plus-diagonal one.
// When the input has positive off-diagonals the graph is the doubled
// (Gremban) construction on 2n vertices and solutions map back through the
// vertex pairing; otherwise the graph sits on the original n vertices.
struct SddReduction {
    WeightedGraph graph;
    std::vector<double> excess_diag;  // per graph vertex, >= 0
    bool doubled = false;
    int original_n = 0;

    // b for the reduced system ((b, -b) when doubled).
    std::vector<double> expand_rhs(std::span<const double> b) const;
    // Solution on the original variables ((top - bottom)/2 when doubled).
    std::vector<double> restrict_solution(std::span<const double> y) const;
    // A x computed through the reduced operator; round-trip check helper.
    std::vector<double> apply_original(std::span<const double> x) const;
};

SddReduction sdd_to_laplacian(const SddMatrix& a);

} // namespace laplax
