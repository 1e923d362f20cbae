#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>

namespace oracle {

using laplax::Edge;
using laplax::WeightedGraph;

Mat dense_laplacian(const WeightedGraph& g) {
    int n = g.vertex_count();
    Mat a(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
    for (const Edge& e : g.edges()) {
        a[std::size_t(e.u)][std::size_t(e.u)] += e.w;
        a[std::size_t(e.v)][std::size_t(e.v)] += e.w;
        a[std::size_t(e.u)][std::size_t(e.v)] -= e.w;
        a[std::size_t(e.v)][std::size_t(e.u)] -= e.w;
    }
    return a;
}

std::vector<double> matvec(const Mat& a, std::span<const double> x) {
    std::vector<double> y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

double quad(const Mat& a, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) s += x[i] * a[i][j] * x[j];
    return s;
}

std::vector<double> jacobi_eigenvalues(Mat a, int max_sweeps, double tol) {
    std::size_t n = a.size();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale += a[i][i] * a[i][i];
        if (off <= tol * tol * std::max(scale, 1e-300)) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> cholesky_solve(Mat a, std::vector<double> b) {
    std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
        if (d <= 0.0) throw std::runtime_error("oracle cholesky: matrix not SPD");
        a[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            a[i][j] = s / a[j][j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i][k] * b[k];
        b[i] = s / a[i][i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[k][i] * b[k];
        b[i] = s / a[i][i];
    }
    return b;
}

std::vector<double> dense_laplacian_solve(const WeightedGraph& g, std::span<const double> b) {
    int n = g.vertex_count();
    if (n <= 1) return std::vector<double>(std::size_t(n), 0.0);
    Mat full = dense_laplacian(g);
    Mat minor(std::size_t(n - 1), std::vector<double>(std::size_t(n - 1), 0.0));
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) minor[std::size_t(i - 1)][std::size_t(j - 1)] = full[std::size_t(i)][std::size_t(j)];
    std::vector<double> rb(b.begin() + 1, b.end());
    std::vector<double> xm = cholesky_solve(std::move(minor), std::move(rb));
    std::vector<double> x(std::size_t(n), 0.0);
    for (int i = 1; i < n; ++i) x[std::size_t(i)] = xm[std::size_t(i - 1)];
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= double(n);
    for (double& v : x) v -= mean;
    return x;
}

DensePinnedSolver::DensePinnedSolver(const WeightedGraph& g) : n_(g.vertex_count()) {
    if (n_ <= 1) return;
    Mat full = dense_laplacian(g);
    std::size_t m = std::size_t(n_ - 1);
    l_.assign(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) l_[i][j] = full[i + 1][j + 1];
    for (std::size_t j = 0; j < m; ++j) {
        double d = l_[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= l_[j][k] * l_[j][k];
        if (d <= 0.0) throw std::runtime_error("oracle pinned solver: not SPD");
        l_[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < m; ++i) {
            double s = l_[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l_[i][k] * l_[j][k];
            l_[i][j] = s / l_[j][j];
        }
        for (std::size_t i = 0; i < j; ++i) l_[i][j] = 0.0;
    }
}

std::vector<double> DensePinnedSolver::solve(std::span<const double> b) const {
    if (n_ <= 1) return std::vector<double>(std::size_t(n_), 0.0);
    std::size_t m = std::size_t(n_ - 1);
    std::vector<double> y(b.begin() + 1, b.end());
    for (std::size_t i = 0; i < m; ++i) {
        double s = y[i];
        for (std::size_t k = 0; k < i; ++k) s -= l_[i][k] * y[k];
        y[i] = s / l_[i][i];
    }
    for (std::size_t i = m; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < m; ++k) s -= l_[k][i] * y[k];
        y[i] = s / l_[i][i];
    }
    std::vector<double> x(std::size_t(n_), 0.0);
    for (std::size_t i = 0; i < m; ++i) x[i + 1] = y[i];
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= double(n_);
    for (double& v : x) v -= mean;
    return x;
}

std::vector<double> pencil_eigenvalues(const WeightedGraph& g, const WeightedGraph& h) {
    int n = g.vertex_count();
    if (n <= 1) return {};
    Mat lg = dense_laplacian(g);
    Mat lh = dense_laplacian(h);
    std::size_t m = std::size_t(n - 1);

    // pinned minors; the pencil spectrum on the quotient by the kernel
    Mat bg(m, std::vector<double>(m, 0.0)), bh(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            bg[i][j] = lg[i + 1][j + 1];
            bh[i][j] = lh[i + 1][j + 1];
        }

    // factor bg = R^T R, then eigenvalues of R^-T bh R^-1
    Mat r = bg;
    for (std::size_t j = 0; j < m; ++j) {
        double d = r[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= r[k][j] * r[k][j];
        if (d <= 0.0) throw std::runtime_error("oracle pencil: G-minor not SPD");
        r[j][j] = std::sqrt(d);
        for (std::size_t c = j + 1; c < m; ++c) {
            double s = r[j][c];
            for (std::size_t k = 0; k < j; ++k) s -= r[k][j] * r[k][c];
            r[j][c] = s / r[j][j];
        }
    }
    // zero lower triangle of r (upper factor)
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) r[i][j] = 0.0;

    auto solve_rt = [&](std::vector<double> v) {  // R^T y = v
        for (std::size_t i = 0; i < m; ++i) {
            double s = v[i];
            for (std::size_t k = 0; k < i; ++k) s -= r[k][i] * v[k];
            v[i] = s / r[i][i];
        }
        return v;
    };
    auto solve_r = [&](std::vector<double> v) {  // R y = v
        for (std::size_t i = m; i-- > 0;) {
            double s = v[i];
            for (std::size_t k = i + 1; k < m; ++k) s -= r[i][k] * v[k];
            v[i] = s / r[i][i];
        }
        return v;
    };

    // C = R^-T bh R^-1, built column by column
    Mat c(m, std::vector<double>(m, 0.0));
    for (std::size_t col = 0; col < m; ++col) {
        std::vector<double> e(m, 0.0);
        e[col] = 1.0;
        std::vector<double> y = solve_r(std::move(e));     // y = R^-1 e
        std::vector<double> v = matvec(bh, y);             // v = bh y
        std::vector<double> z = solve_rt(std::move(v));    // z = R^-T v
        for (std::size_t rrow = 0; rrow < m; ++rrow) c[rrow][col] = z[rrow];
    }
    // symmetrize away roundoff before Jacobi
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double s = 0.5 * (c[i][j] + c[j][i]);
            c[i][j] = c[j][i] = s;
        }
    return jacobi_eigenvalues(std::move(c));
}

std::vector<double> dijkstra_reference(const WeightedGraph& g, std::span<const double> lengths,
                                       int source) {
    int n = g.vertex_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(std::size_t(n), inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[std::size_t(source)] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[std::size_t(v)]) continue;
        for (auto [u, eid] : g.neighbors(v)) {
            double nd = d + lengths[std::size_t(eid)];
            if (nd < dist[std::size_t(u)]) {
                dist[std::size_t(u)] = nd;
                heap.push({nd, u});
            }
        }
    }
    return dist;
}

double edge_stretch_by_walk(const WeightedGraph& g, std::span<const int> tree_edge_ids, int u,
                            int v, double w) {
    int n = g.vertex_count();
    // parents by BFS over the tree edges from u
    std::vector<std::vector<std::pair<int, double>>> adj((std::size_t(n)));
    for (int id : tree_edge_ids) {
        const Edge& e = g.edge(id);
        adj[std::size_t(e.u)].push_back({e.v, e.w});
        adj[std::size_t(e.v)].push_back({e.u, e.w});
    }
    std::vector<int> parent(std::size_t(n), -1);
    std::vector<double> pw(std::size_t(n), 0.0);
    std::queue<int> q;
    q.push(u);
    parent[std::size_t(u)] = u;
    while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (auto [b, bw] : adj[std::size_t(a)]) {
            if (parent[std::size_t(b)] >= 0) continue;
            parent[std::size_t(b)] = a;
            pw[std::size_t(b)] = bw;
            q.push(b);
        }
    }
    if (parent[std::size_t(v)] < 0) throw std::runtime_error("oracle walk: tree does not connect endpoints");
    double res = 0.0;
    for (int a = v; a != u; a = parent[std::size_t(a)]) res += 1.0 / pw[std::size_t(a)];
    return w * res;
}

WeightedGraph random_connected_graph(int n, int extra, std::uint64_t seed, double w_lo,
                                     double w_hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wdist(w_lo, w_hi);
    std::vector<Edge> edges;
    std::vector<int> order(std::size_t(n), 0);
    for (int i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        edges.push_back({order[std::size_t(i)], order[std::size_t(pick(rng))], wdist(rng)});
    }
    std::set<std::pair<int, int>> used;
    for (const Edge& e : edges) used.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
    std::uniform_int_distribution<int> vpick(0, n - 1);
    int placed = 0;
    int guard = 0;
    while (placed < extra && guard < 100 * extra + 1000) {
        ++guard;
        int a = vpick(rng), b = vpick(rng);
        if (a == b) continue;
        auto key = std::pair(std::min(a, b), std::max(a, b));
        if (used.count(key)) continue;
        used.insert(key);
        edges.push_back({a, b, wdist(rng)});
        ++placed;
    }
    return WeightedGraph::from_edges(n, std::move(edges));
}

std::vector<int> random_spanning_tree(const WeightedGraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> ids(std::size_t(g.edge_count()), 0);
    for (int i = 0; i < g.edge_count(); ++i) ids[std::size_t(i)] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<int> parent(std::size_t(g.vertex_count()), 0);
    for (int i = 0; i < g.vertex_count(); ++i) parent[std::size_t(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[std::size_t(x)] != x) x = parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
        return x;
    };
    std::vector<int> tree;
    for (int id : ids) {
        const Edge& e = g.edge(id);
        int a = find(e.u), b = find(e.v);
        if (a == b) continue;
        parent[std::size_t(a)] = b;
        tree.push_back(id);
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

} // namespace oracle
