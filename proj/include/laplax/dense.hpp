#pragma once

#include <span>
#include <vector>

#include "laplax/graph.hpp"

namespace laplax {

// Row-major dense matrix, only as large as chain base cases and small-level
// spectral checks need. Not a general linear-algebra layer.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * std::size_t(cols), 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& at(int i, int j) { return a_[std::size_t(i) * std::size_t(cols_) + std::size_t(j)]; }
    double at(int i, int j) const { return a_[std::size_t(i) * std::size_t(cols_) + std::size_t(j)]; }

    static DenseMatrix laplacian(const WeightedGraph& g);

    std::vector<double> apply(std::span<const double> x) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

// In-place LL^T factorization of an SPD matrix; throws input_error when a
// pivot degenerates.
class DenseCholesky {
public:
    DenseCholesky() = default;
    explicit DenseCholesky(DenseMatrix spd);

    int dim() const { return l_.rows(); }
    std::vector<double> solve(std::span<const double> b) const;

private:
    DenseMatrix l_;
};

// Laplacian of a connected graph pinned at one vertex: factorization of the
// principal minor with the pin row/column removed. solve() takes b with
// sum zero and returns the mean-centered potential vector.
class PinnedLaplacianSolver {
public:
    PinnedLaplacianSolver() = default;
    explicit PinnedLaplacianSolver(const WeightedGraph& g, int pin = 0);

    int dim() const { return n_; }
    std::vector<double> solve(std::span<const double> b) const;

private:
    int n_ = 0;
    int pin_ = 0;
    DenseCholesky chol_;
};

} // namespace laplax
