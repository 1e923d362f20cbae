"""SDD linear-system solver bindings.

The compiled core lives in `_laplax`; this package re-exports it.
"""

from _laplax import (  # noqa: F401
    Chain,
    Graph,
    InputError,
    InternalError,
    build_chain,
    grid,
    load_graph,
    low_stretch_tree,
    random_regular,
    ring,
    save_graph,
    solve_laplacian,
    solve_matrix_market,
    torus,
    total_stretch,
    verify_chain,
)

__all__ = [
    "Chain",
    "Graph",
    "InputError",
    "InternalError",
    "build_chain",
    "grid",
    "load_graph",
    "low_stretch_tree",
    "random_regular",
    "ring",
    "save_graph",
    "solve_laplacian",
    "solve_matrix_market",
    "torus",
    "total_stretch",
    "verify_chain",
]
