"""Smoke tests for the compiled module: the bindings wire up, solve small
systems, and report sane numbers. Heavy numerical checks live in the C++
suites."""

import math

import pytest

import laplax


def centered(values):
    mean = sum(values) / len(values)
    return [v - mean for v in values]


def test_generators_and_graph_basics():
    g = laplax.grid(4, 5)
    assert g.n == 20
    assert g.m == 4 * 4 + 5 * 3
    assert g.connected()
    assert "Graph" in repr(g)

    ring = laplax.ring(7)
    assert ring.m == 7

    rr = laplax.random_regular(10, 3, seed=3)
    degrees = [0] * 10
    for u, v, _ in rr.edges():
        degrees[u] += 1
        degrees[v] += 1
    assert all(d == 3 for d in degrees)


def test_graph_validation_raises():
    with pytest.raises(ValueError):
        laplax.Graph(2, [(0, 0, 1.0)])
    with pytest.raises(ValueError):
        laplax.grid(1, 4)


def test_low_stretch_tree_reports_zero_for_trees():
    path = laplax.Graph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)])
    rep = laplax.low_stretch_tree(path, seed=1)
    assert rep["total_stretch"] == pytest.approx(0.0)
    assert len(rep["tree_edges"]) == 3


def test_low_stretch_tree_on_ring():
    ring = laplax.ring(25)
    rep = laplax.low_stretch_tree(ring, seed=5)
    assert rep["total_stretch"] == pytest.approx(24.0)


def test_solve_laplacian_small_grid():
    g = laplax.grid(8, 8, seed=2)
    b = centered([math.sin(0.3 * i) for i in range(g.n)])
    x, report = laplax.solve_laplacian(g, b, eps=1e-8, seed=7)
    assert report["converged"]
    assert report["rel_residual"] <= 1e-8
    assert len(x) == g.n
    assert abs(sum(x)) < 1e-6


def test_solve_is_deterministic():
    g = laplax.grid(6, 6, seed=4)
    b = centered([((i * 37) % 11) - 5.0 for i in range(g.n)])
    x1, _ = laplax.solve_laplacian(g, b, eps=1e-8, seed=9)
    x2, _ = laplax.solve_laplacian(g, b, eps=1e-8, seed=9)
    assert x1 == x2


def test_chain_build_and_verify():
    g = laplax.grid(24, 24, seed=6)
    chain = laplax.build_chain(g, seed=11)
    assert chain.depth >= 2
    sizes = chain.level_sizes()
    assert sizes[-1][0] <= 100
    check = laplax.verify_chain(chain)
    assert check["all_pass"], check["items"]


def test_matrix_market_roundtrip(tmp_path):
    path = tmp_path / "g.txt"
    g = laplax.grid(5, 5, seed=8)
    laplax.save_graph(str(path), g)
    back = laplax.load_graph(str(path))
    assert back.n == g.n
    assert back.m == g.m
    assert back.edges() == g.edges()
