#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>

#include "laplax/config.hpp"
#include "laplax/generators.hpp"
#include "laplax/io.hpp"
#include "laplax/laplacian.hpp"
#include "laplax/lsst.hpp"
#include "laplax/rng.hpp"
#include "laplax/solver.hpp"
#include "laplax/stretch.hpp"

using json = nlohmann::ordered_json;
using namespace laplax;

namespace {

// 0 ok, 1 usage/parse, 2 convergence cap hit, 3 internal tripwire
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitAssert = 3;

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

struct GlobalFlags {
    ConfigOverrides flags;
    std::string config_path;
    bool timings = false;  // real timings in file outputs are opt-in so that
                           // repeated runs stay byte-identical
    RunConfig resolve() const {
        ConfigOverrides file;
        if (!config_path.empty()) file = parse_config_file(config_path);
        return resolve_config(flags, env_overrides(), file);
    }
    double emit_ms(double measured) const { return timings ? measured : 0.0; }
};

void add_global_options(CLI::App* cmd, GlobalFlags& g) {
    cmd->add_option("--config", g.config_path, "key=value configuration file");
    cmd->add_flag("--timings", g.timings, "write measured wall times into reports");
    auto opt = [&](const char* name, auto& slot, const char* help) {
        return cmd->add_option_function<std::string>(
            name,
            [&slot, name](const std::string& v) {
                ConfigOverrides tmp;
                // reuse the config parser for validation and typing
                std::string key = std::string(name).substr(2);
                for (char& c : key)
                    if (c == '-') c = '_';
                tmp = parse_config_text(key + "=" + v, "flag " + std::string(name));
                if (tmp.seed) slot.seed = tmp.seed;
                if (tmp.eps) slot.eps = tmp.eps;
                if (tmp.c_s) slot.c_s = tmp.c_s;
                if (tmp.kappa_c) slot.kappa_c = tmp.kappa_c;
                if (tmp.c_stop) slot.c_stop = tmp.c_stop;
                if (tmp.c1) slot.c1 = tmp.c1;
                if (tmp.c_r) slot.c_r = tmp.c_r;
                if (tmp.retries) slot.retries = tmp.retries;
            },
            help);
    };
    opt("--seed", g.flags, "random seed (64-bit)");
    opt("--eps", g.flags, "target relative error");
    opt("--cs", g.flags, "sampler oversampling constant");
    opt("--kappa-c", g.flags, "per-level condition target");
    opt("--c-stop", g.flags, "terminal chain size");
    opt("--c1", g.flags, "level-1 tree scale constant");
    opt("--cr", g.flags, "iteration/reduction coupling constant");
    opt("--retries", g.flags, "sparsifier retry budget");
}

WeightedGraph load_graph(const std::string& path) { return read_edge_list_file(path); }

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    require(bool(out), "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

json report_to_json(const SolveReport& rep, const GlobalFlags& g) {
    json j;
    j["eps"] = rep.eps;
    j["seed"] = rep.seed;
    j["converged"] = rep.converged;
    j["rel_residual"] = rep.rel_residual;
    j["iterations"] = rep.outer_iterations;
    j["planned_iterations"] = rep.planned_iterations;
    j["chain_depth"] = rep.chain_depth;
    j["edge_touches"] = rep.edge_touches;
    j["projection_magnitude"] = rep.projection_magnitude;
    j["build_ms"] = g.emit_ms(rep.build_ms);
    j["solve_ms"] = g.emit_ms(rep.solve_ms);
    return j;
}

// --- generate ---

struct GenerateArgs {
    std::string kind;
    int rows = 0, cols = 0, n = 0, degree = 3;
    double wmin = 1.0, wmax = 1.0;
    std::string out;
    std::string format = "edgelist";
};

int run_generate(const GenerateArgs& a, const GlobalFlags& g) {
    RunConfig cfg = g.resolve();
    GeneratorParams p{a.wmin, a.wmax, cfg.seed};
    WeightedGraph graph;
    if (a.kind == "grid") {
        graph = make_grid(a.rows, a.cols, p);
    } else if (a.kind == "torus") {
        graph = make_torus(a.rows, a.cols, p);
    } else if (a.kind == "ring") {
        graph = make_ring(a.n, p);
    } else if (a.kind == "random-regular") {
        graph = make_random_regular(a.n, a.degree, p);
    } else {
        throw input_error("unknown generator kind `" + a.kind + "`");
    }

    if (a.format == "edgelist") {
        if (a.out.empty())
            write_edge_list(std::cout, graph);
        else
            write_edge_list_file(a.out, graph);
    } else if (a.format == "mm") {
        // Laplacian of the graph as a coordinate matrix
        std::vector<std::tuple<int, int, double>> trips;
        std::vector<double> diag(std::size_t(graph.vertex_count()), 0.0);
        for (const Edge& e : graph.edges()) {
            trips.push_back({e.u, e.v, -e.w});
            diag[std::size_t(e.u)] += e.w;
            diag[std::size_t(e.v)] += e.w;
        }
        for (int i = 0; i < graph.vertex_count(); ++i) trips.push_back({i, i, diag[std::size_t(i)]});
        SddMatrix m = SddMatrix::from_triplets(graph.vertex_count(), std::move(trips));
        if (a.out.empty())
            write_matrix_market(std::cout, m);
        else
            write_matrix_market_file(a.out, m);
    } else {
        throw input_error("unknown format `" + a.format + "` (edgelist|mm)");
    }
    std::cerr << "generated " << a.kind << ": n=" << graph.vertex_count()
              << " m=" << graph.edge_count() << "\n";
    return kExitOk;
}

// --- solve ---

struct SolveArgs {
    std::string matrix, graph, rhs, out, report, chain_path;
    bool rhs_random = false;
};

int run_solve(const SolveArgs& a, const GlobalFlags& g) {
    RunConfig cfg = g.resolve();
    require(a.matrix.empty() != a.graph.empty(), "pass exactly one of --matrix or --graph");

    SolveOptions sopt = cfg.solve_options();
    ChainConfig ccfg = cfg.chain_config();

    SddSolveResult result;
    int n = 0;
    auto t0 = clock_type::now();
    if (!a.matrix.empty()) {
        SddMatrix m = read_matrix_market_file(a.matrix);
        n = m.dim();
        std::vector<double> b;
        if (a.rhs_random || a.rhs.empty()) {
            Rng rng(cfg.seed ^ 0xb5ad4eceda1ce2a9ULL);
            b.resize(std::size_t(n));
            for (double& v : b) v = rng.next_in(-1.0, 1.0);
        } else {
            b = read_vector_file(a.rhs);
            require(int(b.size()) == n, "rhs length does not match the matrix");
        }
        result = solve(m, b, sopt, ccfg);
    } else {
        WeightedGraph graph = load_graph(a.graph);
        n = graph.vertex_count();
        std::vector<double> b;
        if (a.rhs_random || a.rhs.empty()) {
            Rng rng(cfg.seed ^ 0xb5ad4eceda1ce2a9ULL);
            b.resize(std::size_t(n));
            for (double& v : b) v = rng.next_in(-1.0, 1.0);
        } else {
            b = read_vector_file(a.rhs);
            require(int(b.size()) == n, "rhs length does not match the graph");
        }
        if (!a.chain_path.empty()) {
            PreconChain chain = read_chain_file(a.chain_path);
            result = solve_laplacian(graph, {}, b, sopt, ccfg, &chain);
        } else {
            result = solve_laplacian(graph, {}, b, sopt, ccfg);
        }
    }
    double total_ms = ms_since(t0);
    (void)total_ms;

    if (!a.out.empty()) write_vector_file(a.out, result.x);
    json j = report_to_json(result.report, g);
    j["n"] = n;
    if (!a.report.empty())
        write_json_file(a.report, j);
    else
        std::cout << j.dump(2) << "\n";
    std::cerr << (result.report.converged ? "converged" : "convergence cap hit")
              << ": rel_residual=" << result.report.rel_residual
              << " iterations=" << result.report.outer_iterations << "\n";
    return result.report.converged ? kExitOk : kExitConvergence;
}

// --- chain build / verify ---

struct ChainArgs {
    std::string graph, chain_path, out, report;
};

int run_chain_build(const ChainArgs& a, const GlobalFlags& g) {
    RunConfig cfg = g.resolve();
    WeightedGraph graph = load_graph(a.graph);
    require(graph.connected(),
            "chain build expects a connected graph; split the input per component");
    auto t0 = clock_type::now();
    PreconChain chain = build_chain(graph, 0.5, cfg.chain_config());
    double ms = ms_since(t0);
    require(!a.out.empty(), "chain build needs --out");
    write_chain_file(a.out, chain);

    json j;
    j["n"] = graph.vertex_count();
    j["m"] = graph.edge_count();
    j["depth"] = chain.depth();
    j["kappas"] = chain.kappas;
    j["mu"] = chain.mu;
    json levels = json::array();
    for (const ChainLevel& lvl : chain.levels) {
        json l;
        l["n"] = lvl.g.vertex_count();
        l["m"] = lvl.g.edge_count();
        l["off_tree_samples"] = lvl.off_tree_samples;
        l["stretch_total"] = lvl.stretch_total;
        l["tree_branch"] = lvl.tree_branch;
        l["sparsify_seed"] = lvl.sparsify_seed;
        l["attempts"] = lvl.sparsify_attempts;
        levels.push_back(l);
    }
    j["levels"] = levels;
    j["terminal_n"] = chain.g_terminal.vertex_count();
    j["build_ms"] = g.emit_ms(ms);
    if (!a.report.empty())
        write_json_file(a.report, j);
    else
        std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_chain_verify(const ChainArgs& a, const GlobalFlags& g) {
    PreconChain chain = read_chain_file(a.chain_path);
    ChainCheck chk = verify_chain(chain);
    json j;
    j["all_pass"] = chk.all_pass;
    json items = json::array();
    for (const auto& item : chk.items) {
        json it;
        it["condition"] = item.id;
        it["pass"] = item.pass;
        it["detail"] = item.detail;
        items.push_back(it);
        std::cerr << "condition " << item.id << ": " << (item.pass ? "pass" : "FAIL") << "\n";
    }
    j["items"] = items;
    j["mu_ratios"] = chk.mu_ratios;
    if (!a.report.empty())
        write_json_file(a.report, j);
    else
        std::cout << j.dump(2) << "\n";
    (void)g;
    return chk.all_pass ? kExitOk : kExitAssert;
}

// --- lsst ---

struct LsstArgs {
    std::string graph, out;
};

int run_lsst(const LsstArgs& a, const GlobalFlags& g) {
    RunConfig cfg = g.resolve();
    WeightedGraph graph = load_graph(a.graph);
    require(graph.connected(), "lsst expects a connected graph");
    LsstOptions opt;
    opt.seed = cfg.seed;
    auto t0 = clock_type::now();
    SpanningTree t = low_stretch_tree(graph, opt);
    double ms = ms_since(t0);
    StretchReport rep = total_stretch(graph, t);

    json j;
    j["n"] = graph.vertex_count();
    j["m"] = graph.edge_count();
    j["total_stretch"] = rep.total;
    j["avg_stretch"] = rep.avg;
    j["max_stretch"] = rep.max;
    j["build_ms"] = g.emit_ms(ms);
    if (!a.out.empty())
        write_json_file(a.out, j);
    else
        std::cout << j.dump(2) << "\n";
    return kExitOk;
}

// --- bench ---

struct BenchArgs {
    std::string kind = "grid";
    std::vector<int> sizes;
    std::string out;
    bool parallel = false;
};

struct BenchRow {
    std::string csv;
    bool converged = true;
};

BenchRow bench_case(const std::string& kind, int size, const RunConfig& cfg,
                    const GlobalFlags& g) {
    WeightedGraph graph;
    if (kind == "grid") {
        graph = make_grid(size, size, {1.0, 1.0, cfg.seed});
    } else if (kind == "random-regular") {
        graph = make_random_regular(size, 3, {1.0, 1.0, cfg.seed});
    } else {
        throw input_error("unknown bench kind `" + kind + "` (grid|random-regular)");
    }
    Rng rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
    std::vector<double> b(std::size_t(graph.vertex_count()), 0.0);
    for (double& v : b) v = rng.next_in(-1.0, 1.0);

    auto tb = clock_type::now();
    PreconChain chain = build_chain(graph, 0.5, cfg.chain_config());
    double build_ms = ms_since(tb);
    SolveOptions sopt = cfg.solve_options();
    ChainSolver solver(chain, sopt);
    project_mean_zero(b);
    SolveReport rep;
    auto ts = clock_type::now();
    solver.solve(b, &rep);
    double solve_ms = ms_since(ts);

    std::ostringstream row;
    row << kind << "," << graph.vertex_count() << "," << graph.edge_count() << ","
        << format_double(g.emit_ms(build_ms)) << "," << format_double(g.emit_ms(solve_ms))
        << "," << rep.outer_iterations << "," << rep.edge_touches << "\n";
    return {row.str(), rep.converged};
}

int run_bench(const BenchArgs& a, const GlobalFlags& g) {
    RunConfig cfg = g.resolve();
    std::ostringstream csv;
    csv << "# laplax-bench v1\n";
    csv << "kind,n,m,build_ms,solve_ms,iterations,edge_touches\n";
    bool capped = false;

    std::vector<BenchRow> rows;
    if (a.parallel) {
        // cases run concurrently but each case is timed on its own thread
        std::vector<std::future<BenchRow>> futures;
        for (int size : a.sizes)
            futures.push_back(std::async(std::launch::async,
                                         [&, size] { return bench_case(a.kind, size, cfg, g); }));
        for (auto& f : futures) rows.push_back(f.get());
    } else {
        for (int size : a.sizes) {
            rows.push_back(bench_case(a.kind, size, cfg, g));
            if (!rows.back().converged) break;
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv << rows[i].csv;
        if (!rows[i].converged) {
            csv << "# convergence cap hit at size " << a.sizes[i]
                << "; remaining sizes skipped\n";
            capped = true;
            break;
        }
    }
    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(a.out);
        require(bool(out), "cannot open " + a.out + " for writing");
        out << csv.str();
    }
    return capped ? kExitConvergence : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SDD linear-system solver via spanning-tree-based sparsification chains"};
    app.require_subcommand(1);

    GlobalFlags gflags;

    GenerateArgs gen;
    CLI::App* c_gen = app.add_subcommand("generate", "emit a benchmark graph");
    add_global_options(c_gen, gflags);
    c_gen->add_option("--kind", gen.kind, "grid|torus|random-regular|ring")->required();
    c_gen->add_option("--rows", gen.rows, "grid/torus rows");
    c_gen->add_option("--cols", gen.cols, "grid/torus cols");
    c_gen->add_option("--n", gen.n, "vertex count (ring, random-regular)");
    c_gen->add_option("--degree", gen.degree, "degree (random-regular)");
    c_gen->add_option("--wmin", gen.wmin, "minimum edge weight");
    c_gen->add_option("--wmax", gen.wmax, "maximum edge weight");
    c_gen->add_option("--out", gen.out, "output path (stdout when omitted)");
    c_gen->add_option("--format", gen.format, "edgelist|mm (mm writes the Laplacian)");

    SolveArgs sol;
    CLI::App* c_solve = app.add_subcommand("solve", "solve an SDD or Laplacian system");
    add_global_options(c_solve, gflags);
    c_solve->add_option("--matrix", sol.matrix, "Matrix Market input");
    c_solve->add_option("--graph", sol.graph, "edge-list input (pure Laplacian)");
    c_solve->add_option("--rhs", sol.rhs, "right-hand side file, one value per line");
    c_solve->add_flag("--rhs-random", sol.rhs_random, "draw a seeded random right-hand side");
    c_solve->add_option("--out", sol.out, "solution output path");
    c_solve->add_option("--report", sol.report, "JSON report path (stdout when omitted)");
    c_solve->add_option("--chain", sol.chain_path, "reuse a prebuilt chain (graph input only)");

    ChainArgs chn;
    CLI::App* c_chain = app.add_subcommand("chain", "preconditioning chain operations");
    CLI::App* c_build = c_chain->add_subcommand("build", "build and store a chain");
    add_global_options(c_build, gflags);
    c_build->add_option("--graph", chn.graph, "edge-list input")->required();
    c_build->add_option("--out", chn.out, "chain file output")->required();
    c_build->add_option("--report", chn.report, "JSON report path");
    CLI::App* c_verify = c_chain->add_subcommand("verify", "re-check the good-chain conditions");
    add_global_options(c_verify, gflags);
    c_verify->add_option("--chain", chn.chain_path, "chain file")->required();
    c_verify->add_option("--report", chn.report, "JSON report path");
    c_chain->require_subcommand(1);

    LsstArgs lst;
    CLI::App* c_lsst = app.add_subcommand("lsst", "build a low-stretch tree and audit it");
    add_global_options(c_lsst, gflags);
    c_lsst->add_option("--graph", lst.graph, "edge-list input")->required();
    c_lsst->add_option("--out", lst.out, "JSON report path (stdout when omitted)");

    BenchArgs ben;
    CLI::App* c_bench = app.add_subcommand("bench", "solve a size sweep and emit CSV");
    add_global_options(c_bench, gflags);
    c_bench->add_option("--kind", ben.kind, "grid|random-regular");
    c_bench->add_option("--sizes", ben.sizes, "sweep sizes (grid side length or vertex count)")
        ->delimiter(',');
    c_bench->add_option("--out", ben.out, "CSV output path (stdout when omitted)");
    c_bench->add_flag("--parallel", ben.parallel,
                      "run sweep cases concurrently (each case still single-threaded)");

    try {
        app.parse(argc, argv);
        if (*c_gen) return run_generate(gen, gflags);
        if (*c_solve) return run_solve(sol, gflags);
        if (*c_chain) {
            if (*c_build) return run_chain_build(chn, gflags);
            if (*c_verify) return run_chain_verify(chn, gflags);
        }
        if (*c_lsst) return run_lsst(lst, gflags);
        if (*c_bench) return run_bench(ben, gflags);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const assertion_error& e) {
        std::cerr << "internal assertion: " << e.what() << "\n";
        return kExitAssert;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssert;
    }
}
