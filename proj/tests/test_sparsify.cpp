#include <doctest.h>

#include <cmath>
#include <random>

#include "laplax/laplacian.hpp"
#include "laplax/sparsify.hpp"
#include "oracles.hpp"

using namespace laplax;

TEST_CASE("sample degenerates correctly on a single edge") {
    WeightedGraph g = WeightedGraph::from_edges(2, {{0, 1, 2.5}});
    SamplerConfig cfg;
    cfg.seed = 42;
    SampleStats stats;
    std::vector<double> freq{1.0};
    SampleGraph out = sample(g, freq, 0.1, cfg, &stats);
    CHECK(long(out.samples.size()) == stats.q_draws);
    for (const Sample& s : out.samples) CHECK(s.parent_edge == 0);
    // reconstructed weight: q_draws copies of w/q_real
    double total = 0.0;
    for (const Sample& s : out.samples) total += s.w;
    CHECK(total == doctest::Approx(2.5 * double(stats.q_draws) / stats.q_real).epsilon(1e-12));
    // the ceil-vs-real gap is the only bias
    CHECK(std::abs(total - 2.5) <= 2.5 / stats.q_real + 1e-12);
}

TEST_CASE("sample weight follows w/(p q) for equal frequencies") {
    WeightedGraph g = WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 4.0}});
    SamplerConfig cfg;
    cfg.seed = 7;
    SampleStats stats;
    std::vector<double> freq{1.0, 1.0};
    SampleGraph out = sample(g, freq, 0.2, cfg, &stats);
    for (const Sample& s : out.samples) {
        double w_e = g.edge(s.parent_edge).w;
        CHECK(s.w == doctest::Approx(2.0 * w_e / stats.q_real).epsilon(1e-12));
    }
}

TEST_CASE("sampling is unbiased per edge within three sigma") {
    WeightedGraph tri = WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 0.5}});
    std::vector<double> freq{0.6, 0.3, 1.1};
    SamplerConfig cfg;
    double xi = 0.3;

    // expectation per trial: sum of sample weights of edge e is
    // w_e * (q_draws / q_real); variance per draw is bounded by the square
    // of the sample weight
    std::vector<double> mean(3, 0.0);
    int trials = 10000;
    SampleStats stats;
    for (int t = 0; t < trials; ++t) {
        cfg.seed = 1000 + std::uint64_t(t);
        SampleGraph out = sample(tri, freq, xi, cfg, &stats);
        for (const Sample& s : out.samples) mean[std::size_t(s.parent_edge)] += s.w;
    }
    for (double& m : mean) m /= double(trials);

    double t_sum = 0.6 + 0.3 + 1.1;
    for (int e = 0; e < 3; ++e) {
        double w_e = tri.edge(e).w;
        double p_e = freq[std::size_t(e)] / t_sum;
        double expectation = w_e * double(stats.q_draws) / stats.q_real;
        double w_l = w_e / (p_e * stats.q_real);
        // sum of q Bernoulli(p) draws of weight w_l
        double var_one = double(stats.q_draws) * p_e * (1 - p_e) * w_l * w_l;
        double sigma_mean = std::sqrt(var_one / double(trials));
        CHECK(std::abs(mean[std::size_t(e)] - expectation) <= 3.0 * sigma_mean + 1e-12);
    }
}

TEST_CASE("incremental sparsify returns the doubled tree when stretch is at most 1") {
    // a tree has zero off-tree stretch
    WeightedGraph tree = oracle::random_connected_graph(30, 0, 5);
    SpanningTree t = SpanningTree::from_host_edges(tree, oracle::random_spanning_tree(tree, 1), 0);
    SamplerConfig cfg;
    cfg.seed = 11;
    SparsifyResult r = incremental_sparsify(tree, t, 4.0, 0.1, cfg);
    CHECK(r.tree_branch);
    CHECK(r.h.samples.empty());
    REQUIRE(int(r.h.tree_edges.size()) == 29);
    for (std::size_t k = 0; k < r.h.tree_edges.size(); ++k) {
        // doubled weights against the host graph
        const Edge& te = r.h.tree_edges[k];
        int host = r.h.tree_host_edge_ids[k];
        CHECK(te.w == doctest::Approx(2.0 * tree.edge(host).w));
    }
}

TEST_CASE("incremental sparsify takes the scaling branch on a cycle") {
    // 5-cycle with a path tree: off-tree stretch is 4 > 1
    WeightedGraph ring = WeightedGraph::from_edges(
        5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {4, 0, 1.0}});
    SpanningTree t = SpanningTree::from_host_edges(ring, std::vector<int>{0, 1, 2, 3}, 0);
    StretchReport rep = total_stretch(ring, t);
    CHECK(rep.total == doctest::Approx(4.0));

    SamplerConfig cfg;
    cfg.seed = 3;
    SparsifyResult r = incremental_sparsify(ring, t, 10.0, 0.1, cfg);
    CHECK_FALSE(r.tree_branch);
    CHECK_FALSE(r.failed);
    CHECK(r.t_hat == doctest::Approx(0.4));
    // output tree carries the 12*kappa scale
    for (std::size_t k = 0; k < r.h.tree_edges.size(); ++k)
        CHECK(r.h.tree_edges[k].w == doctest::Approx(120.0));
}

TEST_CASE("off-tree sample stretch is the closed form, uniformly") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        WeightedGraph g = oracle::random_connected_graph(60, 120, rng());
        SpanningTree t = SpanningTree::from_host_edges(g, oracle::random_spanning_tree(g, rng()), 0);
        SamplerConfig cfg;
        cfg.seed = rng();
        SparsifyResult r = incremental_sparsify(g, t, 4.0, 0.05, cfg);
        if (r.failed || r.tree_branch || r.h.samples.empty()) continue;
        double got = off_tree_sample_stretch(r.h, 1e-9);
        double want = expected_sample_stretch(r);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("off-tree stretch uniformity check computes the triangle by hand") {
    WeightedGraph tri = WeightedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    SpanningTree t = SpanningTree::from_host_edges(tri, std::vector<int>{0, 1}, 0);
    SamplerConfig cfg;
    cfg.seed = 23;
    double kappa = 2.0, xi = 0.25;
    SparsifyResult r = incremental_sparsify(tri, t, kappa, xi, cfg);
    REQUIRE_FALSE(r.failed);
    REQUIRE_FALSE(r.tree_branch);
    // stretch of the off-tree edge is 2, so t_hat = 2/kappa = 1, t = 3
    CHECK(r.stats.t == doctest::Approx(3.0));
    double log_t = std::max(std::log(3.0), 1.0);
    double log_inv_xi = std::log(1.0 / xi);
    double want = 1.0 / (3.0 * cfg.c_s * log_t * log_inv_xi);
    if (!r.h.samples.empty())
        CHECK(off_tree_sample_stretch(r.h) == doctest::Approx(want).epsilon(1e-9));
    // vacuous when no samples landed off-tree
    SampleGraph bare;
    bare.n = 2;
    bare.tree_edges.push_back({0, 1, 2.0});
    CHECK(off_tree_sample_stretch(bare) == 0.0);
}

TEST_CASE("sample groups reconstruct per-edge totals") {
    WeightedGraph g = oracle::random_connected_graph(25, 40, 3);
    std::vector<double> freq(std::size_t(g.edge_count()), 1.0);
    SamplerConfig cfg;
    cfg.seed = 5;
    SampleStats stats;
    SampleGraph out = sample(g, freq, 0.2, cfg, &stats);
    auto groups = out.groups_by_parent();
    double regroup_total = 0.0;
    for (auto& [edge, ids] : groups) {
        CHECK(edge >= 0);
        KahanSum s;
        for (int i : ids) {
            CHECK(out.samples[std::size_t(i)].parent_edge == edge);
            s.add(out.samples[std::size_t(i)].w);
        }
        regroup_total += s.value();
    }
    KahanSum direct;
    for (const Sample& smp : out.samples) direct.add(smp.w);
    CHECK(regroup_total == doctest::Approx(direct.value()).epsilon(1e-12));
}

TEST_CASE("sample counts respect the failure threshold when not failing") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 30; ++rep) {
        WeightedGraph g = oracle::random_connected_graph(50, 100, rng());
        SpanningTree t = SpanningTree::from_host_edges(g, oracle::random_spanning_tree(g, rng()), 0);
        SamplerConfig cfg;
        cfg.seed = rng();
        SparsifyResult r = incremental_sparsify(g, t, 6.0, 0.1, cfg);
        if (r.failed || r.tree_branch) continue;
        CHECK(double(r.off_tree_draws) <= r.fail_threshold);
        CHECK(long(r.h.samples.size()) == r.off_tree_draws);
    }
}

TEST_CASE("spectral lower bound holds on random quadratic forms") {
    std::mt19937_64 rng(31);
    WeightedGraph g = oracle::random_connected_graph(40, 80, 77);
    SpanningTree t = SpanningTree::from_host_edges(g, oracle::random_spanning_tree(g, 78), 0);
    SamplerConfig cfg;
    cfg.seed = 79;
    SparsifyResult r = incremental_sparsify(g, t, 6.0, 0.05, cfg);
    REQUIRE_FALSE(r.failed);
    WeightedGraph h = r.h.flatten();
    std::uniform_real_distribution<double> dist(-1, 1);
    std::vector<double> x(40, 0.0);
    for (int s = 0; s < 100; ++s) {
        for (double& v : x) v = dist(rng);
        CHECK(quadratic_form(g, x) <= quadratic_form(h, x) * (1 + 1e-9));
    }
}

TEST_CASE("spectral sandwich verified by the dense pencil oracle") {
    std::mt19937_64 rng(41);
    int checked = 0;
    for (int rep = 0; rep < 4; ++rep) {
        WeightedGraph g = oracle::random_connected_graph(100, 200, rng());
        SpanningTree t =
            SpanningTree::from_host_edges(g, oracle::random_spanning_tree(g, rng()), 0);
        double kappa = 10.0;
        bool pass = false;
        for (int attempt = 0; attempt < 3 && !pass; ++attempt) {
            SamplerConfig cfg;
            cfg.seed = rng();
            SparsifyResult r = incremental_sparsify(g, t, kappa, 0.05, cfg);
            if (r.failed) continue;
            std::vector<double> ev = oracle::pencil_eigenvalues(g, r.h.flatten());
            pass = ev.front() >= 1.0 - 1e-9 && ev.back() <= 54.0 * kappa * (1 + 1e-9);
        }
        CHECK(pass);
        ++checked;
    }
    CHECK(checked == 4);
}

TEST_CASE("failure rate over seeded runs stays small") {
    std::mt19937_64 rng(53);
    WeightedGraph g = oracle::random_connected_graph(100, 250, 99);
    SpanningTree t = SpanningTree::from_host_edges(g, oracle::random_spanning_tree(g, 98), 0);
    int fails = 0;
    for (int run = 0; run < 200; ++run) {
        SamplerConfig cfg;
        cfg.seed = rng();
        SparsifyResult r = incremental_sparsify(g, t, 5.0, 0.1, cfg);
        if (r.failed) ++fails;
    }
    CHECK(fails <= 10);  // 5% of 200
}

TEST_CASE("sampling rejects bad parameters") {
    WeightedGraph g = WeightedGraph::from_edges(2, {{0, 1, 1.0}});
    SamplerConfig cfg;
    std::vector<double> freq{1.0};
    CHECK_THROWS_AS(sample(g, freq, 1.5, cfg), input_error);
    std::vector<double> neg{-1.0};
    CHECK_THROWS_AS(sample(g, neg, 0.1, cfg), input_error);
    std::vector<double> zero{0.0};
    CHECK_THROWS_AS(sample(g, zero, 0.1, cfg), input_error);
    SamplerConfig bad;
    bad.c_s = 1.0;
    CHECK_THROWS_AS(sample(g, freq, 0.1, bad), input_error);
}

TEST_CASE("chunked sampling is deterministic for a fixed chunk count") {
    WeightedGraph g = oracle::random_connected_graph(20, 30, 5);
    std::vector<double> freq(std::size_t(g.edge_count()), 1.0);
    SamplerConfig cfg;
    cfg.seed = 9;
    cfg.chunks = 4;
    SampleGraph a = sample(g, freq, 0.1, cfg);
    SampleGraph b = sample(g, freq, 0.1, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].parent_edge == b.samples[i].parent_edge);
        CHECK(a.samples[i].w == b.samples[i].w);
    }
}
