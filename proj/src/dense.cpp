#include "laplax/dense.hpp"

#include <cmath>

#include "laplax/laplacian.hpp"

namespace laplax {

DenseMatrix DenseMatrix::laplacian(const WeightedGraph& g) {
    DenseMatrix m(g.vertex_count(), g.vertex_count());
    for (const Edge& e : g.edges()) {
        m.at(e.u, e.u) += e.w;
        m.at(e.v, e.v) += e.w;
        m.at(e.u, e.v) -= e.w;
        m.at(e.v, e.u) -= e.w;
    }
    return m;
}

std::vector<double> DenseMatrix::apply(std::span<const double> x) const {
    require(int(x.size()) == cols_, "dense apply: dimension mismatch");
    std::vector<double> y(std::size_t(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        KahanSum s;
        for (int j = 0; j < cols_; ++j) s.add(at(i, j) * x[std::size_t(j)]);
        y[std::size_t(i)] = s.value();
    }
    return y;
}

DenseCholesky::DenseCholesky(DenseMatrix spd) : l_(std::move(spd)) {
    int n = l_.rows();
    require(n == l_.cols(), "Cholesky needs a square matrix");
    for (int j = 0; j < n; ++j) {
        double d = l_.at(j, j);
        for (int k = 0; k < j; ++k) d -= l_.at(j, k) * l_.at(j, k);
        require(d > 0.0, "matrix not positive definite at pivot " + std::to_string(j));
        double lj = std::sqrt(d);
        l_.at(j, j) = lj;
        for (int i = j + 1; i < n; ++i) {
            double s = l_.at(i, j);
            for (int k = 0; k < j; ++k) s -= l_.at(i, k) * l_.at(j, k);
            l_.at(i, j) = s / lj;
        }
    }
}

std::vector<double> DenseCholesky::solve(std::span<const double> b) const {
    int n = l_.rows();
    require(int(b.size()) == n, "Cholesky solve: dimension mismatch");
    std::vector<double> y(b.begin(), b.end());
    for (int i = 0; i < n; ++i) {
        double s = y[std::size_t(i)];
        for (int k = 0; k < i; ++k) s -= l_.at(i, k) * y[std::size_t(k)];
        y[std::size_t(i)] = s / l_.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[std::size_t(i)];
        for (int k = i + 1; k < n; ++k) s -= l_.at(k, i) * y[std::size_t(k)];
        y[std::size_t(i)] = s / l_.at(i, i);
    }
    return y;
}

PinnedLaplacianSolver::PinnedLaplacianSolver(const WeightedGraph& g, int pin)
    : n_(g.vertex_count()), pin_(pin) {
    require(g.connected(), "pinned solver needs a connected graph");
    require(pin >= 0 && pin < std::max(n_, 1), "pin out of range");
    if (n_ <= 1) return;
    DenseMatrix full = DenseMatrix::laplacian(g);
    DenseMatrix minor(n_ - 1, n_ - 1);
    for (int i = 0, im = 0; i < n_; ++i) {
        if (i == pin_) continue;
        for (int j = 0, jm = 0; j < n_; ++j) {
            if (j == pin_) continue;
            minor.at(im, jm) = full.at(i, j);
            ++jm;
        }
        ++im;
    }
    chol_ = DenseCholesky(std::move(minor));
}

std::vector<double> PinnedLaplacianSolver::solve(std::span<const double> b) const {
    require(int(b.size()) == n_, "pinned solve: dimension mismatch");
    if (n_ <= 1) return std::vector<double>(std::size_t(n_), 0.0);
    std::vector<double> rb;
    rb.reserve(std::size_t(n_) - 1);
    for (int i = 0; i < n_; ++i)
        if (i != pin_) rb.push_back(b[std::size_t(i)]);
    std::vector<double> xm = chol_.solve(rb);
    std::vector<double> x(std::size_t(n_), 0.0);
    for (int i = 0, im = 0; i < n_; ++i)
        if (i != pin_) x[std::size_t(i)] = xm[std::size_t(im++)];
    project_mean_zero(x);
    return x;
}

} // namespace laplax
