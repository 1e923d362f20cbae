#include "laplax/sdd.hpp"

#include <algorithm>
#include <cmath>

#include "laplax/laplacian.hpp"

namespace laplax {

SddMatrix SddMatrix::from_triplets(int n, std::vector<std::tuple<int, int, double>> entries) {
    require(n >= 0, "negative dimension");
    // mirror off-diagonals so both triangles are present exactly once
    std::vector<std::tuple<int, int, double>> full;
    full.reserve(entries.size() * 2);
    for (auto [i, j, v] : entries) {
        require(i >= 0 && i < n && j >= 0 && j < n, "entry index out of range");
        if (v == 0.0) continue;
        full.emplace_back(i, j, v);
        if (i != j) full.emplace_back(j, i, v);
    }
    std::sort(full.begin(), full.end(), [](const auto& a, const auto& b) {
        return std::pair(std::get<0>(a), std::get<1>(a)) < std::pair(std::get<0>(b), std::get<1>(b));
    });
    // collapse exact duplicates from inputs that listed both triangles
    std::vector<std::tuple<int, int, double>> dedup;
    for (const auto& t : full) {
        if (!dedup.empty() && std::get<0>(dedup.back()) == std::get<0>(t) &&
            std::get<1>(dedup.back()) == std::get<1>(t)) {
            require(std::get<2>(dedup.back()) == std::get<2>(t),
                    "asymmetric duplicate entry at (" + std::to_string(std::get<0>(t)) + "," +
                        std::to_string(std::get<1>(t)) + ")");
            continue;
        }
        dedup.push_back(t);
    }

    SddMatrix a;
    a.n_ = n;
    a.row_off_.assign(std::size_t(n) + 1, 0);
    for (const auto& t : dedup) ++a.row_off_[std::size_t(std::get<0>(t)) + 1];
    for (int i = 0; i < n; ++i) a.row_off_[std::size_t(i) + 1] += a.row_off_[std::size_t(i)];
    a.col_.resize(dedup.size());
    a.val_.resize(dedup.size());
    for (std::size_t k = 0; k < dedup.size(); ++k) {
        a.col_[k] = std::get<1>(dedup[k]);
        a.val_[k] = std::get<2>(dedup[k]);
    }
    a.validate();
    return a;
}

std::span<const int> SddMatrix::row_cols(int i) const {
    return std::span<const int>(col_).subspan(std::size_t(row_off_[std::size_t(i)]),
                                              std::size_t(row_off_[std::size_t(i) + 1] - row_off_[std::size_t(i)]));
}

std::span<const double> SddMatrix::row_vals(int i) const {
    return std::span<const double>(val_).subspan(std::size_t(row_off_[std::size_t(i)]),
                                                 std::size_t(row_off_[std::size_t(i) + 1] - row_off_[std::size_t(i)]));
}

double SddMatrix::at(int i, int j) const {
    auto cols = row_cols(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0.0;
    return row_vals(i)[std::size_t(it - cols.begin())];
}

std::vector<double> SddMatrix::apply(std::span<const double> x) const {
    require(int(x.size()) == n_, "dimension mismatch in SDD apply");
    std::vector<double> y(std::size_t(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        KahanSum s;
        auto cols = row_cols(i);
        auto vals = row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) s.add(vals[k] * x[std::size_t(cols[k])]);
        y[std::size_t(i)] = s.value();
    }
    return y;
}

void SddMatrix::validate() const {
    // exact symmetry
    for (int i = 0; i < n_; ++i) {
        auto cols = row_cols(i);
        auto vals = row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            int j = cols[k];
            if (j == i) continue;
            if (at(j, i) != vals[k])
                throw input_error("matrix not symmetric at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        }
    }
    // diagonal dominance, 1e-12 relative slack for accumulated input noise
    for (int i = 0; i < n_; ++i) {
        auto cols = row_cols(i);
        auto vals = row_vals(i);
        double diag = 0.0;
        KahanSum off;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == i)
                diag = vals[k];
            else
                off.add(std::abs(vals[k]));
        }
        double o = off.value();
        if (diag < o * (1.0 - 1e-12))
            throw input_error("row " + std::to_string(i) + " not diagonally dominant");
    }
}

bool SddMatrix::has_positive_offdiagonal() const {
    for (int i = 0; i < n_; ++i) {
        auto cols = row_cols(i);
        auto vals = row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (cols[k] != i && vals[k] > 0.0) return true;
    }
    return false;
}

std::vector<double> SddMatrix::diagonal_excess() const {
    std::vector<double> d(std::size_t(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        auto cols = row_cols(i);
        auto vals = row_vals(i);
        double diag = 0.0;
        KahanSum off;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == i)
                diag = vals[k];
            else
                off.add(std::abs(vals[k]));
        }
        d[std::size_t(i)] = std::max(0.0, diag - off.value());
    }
    return d;
}

SddReduction sdd_to_laplacian(const SddMatrix& a) {
    int n = a.dim();
    SddReduction red;
    red.original_n = n;
    std::vector<double> excess = a.diagonal_excess();

    if (!a.has_positive_offdiagonal()) {
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i) {
            auto cols = a.row_cols(i);
            auto vals = a.row_vals(i);
            for (std::size_t k = 0; k < cols.size(); ++k)
                if (cols[k] > i && vals[k] < 0.0) edges.push_back({i, cols[k], -vals[k]});
        }
        red.graph = WeightedGraph::from_edges(n, std::move(edges));
        red.excess_diag = std::move(excess);
        red.doubled = false;
        return red;
    }

    // Doubled construction: negative entries connect like copies, positive
    // entries connect across copies; diagonal excess repeats on both.
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_vals(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            int j = cols[k];
            double v = vals[k];
            if (j <= i || v == 0.0) continue;
            if (v < 0.0) {
                edges.push_back({i, j, -v});
                edges.push_back({i + n, j + n, -v});
            } else {
                edges.push_back({i, j + n, v});
                edges.push_back({j, i + n, v});
            }
        }
    }
    red.graph = WeightedGraph::from_edges(2 * n, std::move(edges));
    red.excess_diag.resize(std::size_t(2 * n));
    for (int i = 0; i < n; ++i) {
        red.excess_diag[std::size_t(i)] = excess[std::size_t(i)];
        red.excess_diag[std::size_t(i + n)] = excess[std::size_t(i)];
    }
    red.doubled = true;
    return red;
}

std::vector<double> SddReduction::expand_rhs(std::span<const double> b) const {
    require(int(b.size()) == original_n, "rhs dimension mismatch");
    if (!doubled) return std::vector<double>(b.begin(), b.end());
    std::vector<double> out(std::size_t(2 * original_n));
    for (int i = 0; i < original_n; ++i) {
        out[std::size_t(i)] = b[std::size_t(i)];
        out[std::size_t(i + original_n)] = -b[std::size_t(i)];
    }
    return out;
}

std::vector<double> SddReduction::restrict_solution(std::span<const double> y) const {
    require(int(y.size()) == graph.vertex_count(), "solution dimension mismatch");
    if (!doubled) return std::vector<double>(y.begin(), y.end());
    std::vector<double> out(std::size_t(original_n), 0.0);
    for (int i = 0; i < original_n; ++i)
        out[std::size_t(i)] = 0.5 * (y[std::size_t(i)] - y[std::size_t(i + original_n)]);
    return out;
}

std::vector<double> SddReduction::apply_original(std::span<const double> x) const {
    require(int(x.size()) == original_n, "dimension mismatch");
    std::vector<double> xe;
    if (doubled) {
        xe.resize(std::size_t(2 * original_n));
        for (int i = 0; i < original_n; ++i) {
            xe[std::size_t(i)] = x[std::size_t(i)];
            xe[std::size_t(i + original_n)] = -x[std::size_t(i)];
        }
    } else {
        xe.assign(x.begin(), x.end());
    }
    std::vector<double> y(xe.size());
    apply_laplacian(graph, xe, y);
    for (std::size_t i = 0; i < xe.size(); ++i) y[i] += excess_diag[i] * xe[i];
    return restrict_solution(y);
}

} // namespace laplax
