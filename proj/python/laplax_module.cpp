#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "laplax/chain.hpp"
#include "laplax/generators.hpp"
#include "laplax/io.hpp"
#include "laplax/laplacian.hpp"
#include "laplax/lsst.hpp"
#include "laplax/solver.hpp"
#include "laplax/stretch.hpp"

namespace py = pybind11;
using namespace laplax;

namespace {

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["eps"] = r.eps;
    d["seed"] = r.seed;
    d["converged"] = r.converged;
    d["rel_residual"] = r.rel_residual;
    d["iterations"] = r.outer_iterations;
    d["planned_iterations"] = r.planned_iterations;
    d["chain_depth"] = r.chain_depth;
    d["edge_touches"] = r.edge_touches;
    d["projection_magnitude"] = r.projection_magnitude;
    return d;
}

WeightedGraph graph_from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges) {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (auto [u, v, w] : edges) es.push_back({u, v, w});
    return WeightedGraph::from_edges(n, std::move(es));
}

} // namespace

PYBIND11_MODULE(_laplax, m) {
    m.doc() = "SDD linear-system solver: low-stretch trees, incremental "
              "sparsification chains, recursive preconditioned Chebyshev.";

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<assertion_error>(m, "InternalError", PyExc_RuntimeError);

    py::class_<WeightedGraph>(m, "Graph")
        .def(py::init(&graph_from_edges), py::arg("n"), py::arg("edges"))
        .def_property_readonly("n", &WeightedGraph::vertex_count)
        .def_property_readonly("m", &WeightedGraph::edge_count)
        .def("edges",
             [](const WeightedGraph& g) {
                 std::vector<std::tuple<int, int, double>> out;
                 for (const Edge& e : g.edges()) out.push_back({e.u, e.v, e.w});
                 return out;
             })
        .def("connected", &WeightedGraph::connected)
        .def("__repr__", [](const WeightedGraph& g) {
            return "Graph(n=" + std::to_string(g.vertex_count()) +
                   ", m=" + std::to_string(g.edge_count()) + ")";
        });

    py::class_<PreconChain>(m, "Chain")
        .def_property_readonly("depth", &PreconChain::depth)
        .def_property_readonly("mu", [](const PreconChain& c) { return c.mu; })
        .def_property_readonly("kappas", [](const PreconChain& c) { return c.kappas; })
        .def("level_sizes", [](const PreconChain& c) {
            std::vector<std::pair<int, int>> out;
            for (const ChainLevel& l : c.levels) out.push_back({l.g.vertex_count(), l.g.edge_count()});
            out.push_back({c.g_terminal.vertex_count(), c.g_terminal.edge_count()});
            return out;
        });

    m.def("load_graph", &read_edge_list_file, py::arg("path"));
    m.def("save_graph", &write_edge_list_file, py::arg("path"), py::arg("graph"));

    m.def(
        "grid",
        [](int rows, int cols, double wmin, double wmax, std::uint64_t seed) {
            return make_grid(rows, cols, {wmin, wmax, seed});
        },
        py::arg("rows"), py::arg("cols"), py::arg("wmin") = 1.0, py::arg("wmax") = 1.0,
        py::arg("seed") = 1);
    m.def(
        "torus",
        [](int rows, int cols, double wmin, double wmax, std::uint64_t seed) {
            return make_torus(rows, cols, {wmin, wmax, seed});
        },
        py::arg("rows"), py::arg("cols"), py::arg("wmin") = 1.0, py::arg("wmax") = 1.0,
        py::arg("seed") = 1);
    m.def(
        "ring", [](int n, std::uint64_t seed) { return make_ring(n, {1.0, 1.0, seed}); },
        py::arg("n"), py::arg("seed") = 1);
    m.def(
        "random_regular",
        [](int n, int degree, std::uint64_t seed) {
            return make_random_regular(n, degree, {1.0, 1.0, seed});
        },
        py::arg("n"), py::arg("degree"), py::arg("seed") = 1);

    m.def(
        "low_stretch_tree",
        [](const WeightedGraph& g, std::uint64_t seed) {
            LsstOptions opt;
            opt.seed = seed;
            SpanningTree t = low_stretch_tree(g, opt);
            StretchReport rep = total_stretch(g, t);
            std::vector<std::tuple<int, int, double>> edges;
            for (int v : t.bfs_order()) {
                if (v == t.root()) continue;
                edges.push_back({v, t.parent(v), t.parent_weight(v)});
            }
            py::dict d;
            d["tree_edges"] = edges;
            d["total_stretch"] = rep.total;
            d["avg_stretch"] = rep.avg;
            d["max_stretch"] = rep.max;
            return d;
        },
        py::arg("graph"), py::arg("seed") = 1);

    m.def(
        "build_chain",
        [](const WeightedGraph& g, double p, double kappa_c, std::uint64_t seed) {
            ChainConfig cfg;
            cfg.kappa_c = kappa_c;
            cfg.seed = seed;
            return build_chain(g, p, cfg);
        },
        py::arg("graph"), py::arg("p") = 0.5, py::arg("kappa_c") = 200.0, py::arg("seed") = 1);

    m.def(
        "verify_chain",
        [](const PreconChain& chain) {
            ChainCheck chk = verify_chain(chain);
            py::list items;
            for (const auto& item : chk.items) {
                py::dict it;
                it["condition"] = item.id;
                it["pass"] = item.pass;
                it["detail"] = item.detail;
                items.append(it);
            }
            py::dict d;
            d["all_pass"] = chk.all_pass;
            d["items"] = items;
            d["mu_ratios"] = chk.mu_ratios;
            return d;
        },
        py::arg("chain"));

    m.def(
        "solve_laplacian",
        [](const WeightedGraph& g, const std::vector<double>& b, double eps, std::uint64_t seed) {
            SolveOptions opt;
            opt.eps = eps;
            opt.seed = seed;
            ChainConfig cfg;
            cfg.seed = seed;
            SddSolveResult r = solve_laplacian(g, {}, b, opt, cfg);
            return py::make_tuple(r.x, report_dict(r.report));
        },
        py::arg("graph"), py::arg("b"), py::arg("eps") = 1e-8, py::arg("seed") = 1);

    m.def(
        "solve_matrix_market",
        [](const std::string& path, const std::vector<double>& b, double eps,
           std::uint64_t seed) {
            SddMatrix a = read_matrix_market_file(path);
            SolveOptions opt;
            opt.eps = eps;
            opt.seed = seed;
            ChainConfig cfg;
            cfg.seed = seed;
            SddSolveResult r = solve(a, b, opt, cfg);
            return py::make_tuple(r.x, report_dict(r.report));
        },
        py::arg("path"), py::arg("b"), py::arg("eps") = 1e-8, py::arg("seed") = 1);

    m.def(
        "total_stretch",
        [](const WeightedGraph& g, const std::vector<int>& tree_edge_ids) {
            SpanningTree t = SpanningTree::from_host_edges(g, tree_edge_ids, 0);
            StretchReport rep = total_stretch(g, t);
            py::dict d;
            d["total"] = rep.total;
            d["avg"] = rep.avg;
            d["max"] = rep.max;
            return d;
        },
        py::arg("graph"), py::arg("tree_edge_ids"));
}
