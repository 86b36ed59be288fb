"""Method dispatch shared by the library facade and the CLI."""
from __future__ import annotations

import time

from .core import Digraph, RealizeResult, Variant, Verdict, check_realization
from .decompose import CertifiedNo, exhaust_splits, recompose
from .exact import arc_budget, dp_solve, oracle_solve, trivial_directed
from .fes import DEFAULT_GRID_CAP, DEFAULT_NODE_BUDGET, fes_solve
from .labels import frugalize
from .solid import components, directed_prune_checks, is_forest, solid_graph
from .tree import solve_tree

METHODS = ("auto", "tree", "fes", "dp", "oracle")
DEFAULT_FES_THRESHOLD = 3


def feedback_edge_number(D: Digraph) -> int:
    """|E| - |V| + #components of the solid graph."""
    G = solid_graph(D)
    return len(G.edges) - D.n + len(components(G))


def _auto_leaf(variant: Variant, fes_threshold: int, grid_cap: int, node_budget: int):
    def leaf(piece: Digraph) -> RealizeResult:
        G = solid_graph(piece)
        if is_forest(G):
            return solve_tree(piece, variant)
        if variant.is_any_strict and feedback_edge_number(piece) <= fes_threshold:
            res = fes_solve(piece, variant, grid_cap, node_budget)
            if res.verdict is not Verdict.UNKNOWN:
                return res
        if len(piece.arcs) <= arc_budget():
            return dp_solve(piece, variant)
        return oracle_solve(piece, variant)
    return leaf


def _auto_directed(D: Digraph, variant: Variant) -> RealizeResult:
    res = trivial_directed(D, variant)
    if res is not None:
        return res
    facts = directed_prune_checks(D)
    if facts.certified_no:
        return RealizeResult.no("directed-prune", facts.reason)
    if len(D.arcs) <= arc_budget():
        return dp_solve(D, variant)
    return oracle_solve(D, variant)


def solve(D: Digraph, variant: Variant, method: str = "auto", *, fes_threshold: int = DEFAULT_FES_THRESHOLD,
          grid_cap: int = DEFAULT_GRID_CAP, node_budget: int = DEFAULT_NODE_BUDGET,
          frugal: bool = True) -> RealizeResult:
    """Decide D under the variant. YES witnesses are certified and, if undirected, frugalized.

    An explicit dp method raises ArcBudgetExceeded past the budget; auto skips to the oracle.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    if method == "auto":
        if variant.directed:
            res = _auto_directed(D, variant)
        else:
            root = exhaust_splits(D, variant)
            if isinstance(root, CertifiedNo):
                res = RealizeResult.no("split", root.reason)
            else:
                res = recompose(root, _auto_leaf(variant, fes_threshold, grid_cap, node_budget), variant)
                if res.yes:
                    res.method = "auto:" + res.method
    elif method == "tree":
        if variant.directed or not is_forest(solid_graph(D)):
            raise ValueError("the tree method needs an undirected variant and a forest solid graph")
        res = solve_tree(D, variant)
    elif method == "fes":
        res = fes_solve(D, variant, grid_cap, node_budget)
    elif method == "dp":
        res = dp_solve(D, variant)
    else:
        res = oracle_solve(D, variant)
    if res.yes:
        chk = check_realization(D, res.labeling, variant)
        if not chk:
            raise AssertionError(f"{res.method} witness failed self-check: {chk.mismatch}")
        if frugal and not variant.directed:
            res.labeling = frugalize(D, res.labeling, variant)
    res.stats.setdefault("seconds", time.perf_counter() - t0)
    return res
