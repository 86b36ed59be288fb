import random

import pytest

from rgr.core import ANY_STRICT, PROPER, Digraph, Labeling, Verdict, check_realization, reachability
from rgr.decompose import CertifiedNo
from rgr.exact import dp_solve
from rgr.fes import (Connector, GridBudgetExceeded, compute_decomposition, compute_Wstar,
                     connector_label_sets, entrance_edge, fes_solve, shrink_pendant_trees,
                     solve_core)
from rgr.solid import solid_graph

from instances import I2, I3, build, cycle


def random_cycle_instance(seed: int, n: int) -> Digraph:
    """Reachability graph of a single-label cycle labeling whose solid graph is exactly C_n."""
    rng = random.Random(seed)
    lab = Labeling(n)
    for i in range(n):
        lab.set(i, (i + 1) % n, [rng.randint(1, 2 * n)])
    D = reachability(lab)
    assert len(solid_graph(D).edges) == n
    return D


# ---------------------------------------------------------------- decomposition

def test_decomposition_of_tree_is_empty():
    dec = compute_decomposition(I3)
    assert dec.F == [] and dec.core == frozenset()


def test_decomposition_of_cycle():
    dec = compute_decomposition(cycle(6))
    assert len(dec.F) == 1
    (f,) = dec.F
    assert dec.X == set(f)
    assert dec.core == set(range(6))
    assert dec.X <= dec.Xstar
    assert len(dec.Xstar) <= 8 * dec.fes
    covered = set(dec.Xstar)
    for P in dec.connectors:
        covered |= set(P.path)
    assert covered == set(range(6))


def test_decomposition_of_triangle():
    D = build(3, solid=[(0, 1), (1, 2), (0, 2)])
    dec = compute_decomposition(D)
    assert dec.fes == 1 and dec.core == {0, 1, 2}


def test_decomposition_cross_component_arc_no():
    D = build(6, solid=[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], dashed=[(0, 3)])
    assert isinstance(compute_decomposition(D), CertifiedNo)


# ---------------------------------------------------------------- pendant shrinking

def _big_star(perturb: bool = False) -> Digraph:
    n = 34
    lab = Labeling(n)
    for i, (u, v) in enumerate([(0, 1), (1, 2), (2, 3), (3, 0)]):
        lab.set(u, v, [100 + i])
    for i in range(30):
        lab.set(0, 4 + i, [2 * i + 1])
    D = reachability(lab)
    if perturb:
        D = Digraph(n, D.arcs - {(4, 33)} | {(33, 4)})
    return D


def test_shrink_small_star_unchanged():
    D = build(6, solid=[(0, 1), (1, 2), (2, 0), (0, 3), (0, 4), (0, 5)],
              dashed=[(3, 4), (4, 5), (3, 5)])
    dec = compute_decomposition(D)
    out = shrink_pendant_trees(D, dec)
    assert not isinstance(out, CertifiedNo) and out.removals == [] and out.D == D


def test_shrink_long_chained_star():
    D = _big_star()
    dec = compute_decomposition(D)
    out = shrink_pendant_trees(D, dec)
    assert not isinstance(out, CertifiedNo)
    assert out.D.n <= 4 + 13
    res = fes_solve(D)
    assert res.yes and check_realization(D, res.labeling, ANY_STRICT).ok


def test_shrink_out_of_order_arc_no():
    D = _big_star(perturb=True)
    dec = compute_decomposition(D)
    assert isinstance(shrink_pendant_trees(D, dec), CertifiedNo)
    assert fes_solve(D).verdict is Verdict.NO


# ---------------------------------------------------------------- W*

@pytest.mark.parametrize("seed", range(4))
def test_wstar_bounds_on_C8(seed):
    D = random_cycle_instance(seed, 8)
    dec = compute_decomposition(D)
    W = compute_Wstar(D, dec)
    assert not isinstance(W, CertifiedNo)
    assert dec.Xstar <= W <= dec.core
    assert len(W) <= len(dec.Xstar) + 16 * max(len(dec.connectors), 1)


@pytest.mark.parametrize("n", [12, 16, 20])
def test_wstar_connectors_are_nice(n):
    D = random_cycle_instance(3, n)
    dec = compute_decomposition(D)
    W = compute_Wstar(D, dec)
    assert len(W) < n and dec.w_connectors
    for P in dec.w_connectors:
        assert P.nice and not set(P.path[1:-1]) & W


def test_wstar_unrealizable_extension_no():
    # cycle with a pendant path hanging off a connector vertex whose arcs violate the tree rules
    n = 14
    D = random_cycle_instance(3, n)
    dec = compute_decomposition(D)
    compute_Wstar(D, dec)
    inner = dec.w_connectors[0].path[2]
    arcs = set(D.arcs) | {(inner, n), (n, inner), (n, n + 1), (n + 1, n), (n + 1, inner)}
    D2 = Digraph(n + 2, frozenset(arcs))
    dec2 = compute_decomposition(D2)
    assert isinstance(compute_Wstar(D2, dec2), CertifiedNo)


# ---------------------------------------------------------------- entrance edges

def _connector_graph(dashed):
    path = (3, 2, 1, 0, 11, 10)
    D = build(12, solid=[(i, (i + 1) % 12) for i in range(12)], dashed=dashed)
    return D, Connector(path, frozenset(path))


def test_entrance_plain_connector():
    D, P = _connector_graph([(1, 3), (1, 5)])
    assert entrance_edge(D, P, 1, 5) == (2, 3)


def test_entrance_dense_connector_both_ends():
    path = (3, 2, 1, 0, 11, 10)
    dense = [(path[i], path[j]) for i in range(6) for j in range(i + 2, 6)]
    D, P = _connector_graph(dense + [(3, 5), (10, 5), (1, 5)])
    assert entrance_edge(D, P, 1, 5) == (10, 11)


def test_entrance_no_route():
    D, P = _connector_graph([(1, 5)])
    assert isinstance(entrance_edge(D, P, 1, 5), CertifiedNo)


# ---------------------------------------------------------------- connector labelings

def test_connector_labelings_plain_path():
    D = random_cycle_instance(3, 12)
    dec = compute_decomposition(D)
    compute_Wstar(D, dec)
    (P,) = dec.w_connectors
    n = D.n
    L = connector_label_sets(D, P, (2 * n,), (4 * n,))
    assert not isinstance(L, CertifiedNo) and len(L.labelings) >= 1
    ea, eb = L.connector.boundary
    for lam in L.labelings:
        assert lam[ea] == (2 * n,) and lam[eb] == (4 * n,)
        assert all(1 <= len(ls) <= 2 for ls in lam.values())


def test_connector_labelings_three_reach_classes_no():
    # interior vertices 2, 1, 0 reach the far vertices 4, 5, 6 in three nested classes
    dashed = [(1, 3), (0, 3), (2, 4), (2, 5), (1, 5), (2, 6), (1, 6), (0, 6)]
    D, P = _connector_graph(dashed)
    assert isinstance(connector_label_sets(D, P, (24,), (48,)), CertifiedNo)


def test_connector_labelings_dead_pins():
    D = random_cycle_instance(2, 12)
    dec = compute_decomposition(D)
    compute_Wstar(D, dec)
    (P,) = dec.w_connectors
    L = connector_label_sets(D, P, (24, 48), (24,))
    assert not isinstance(L, CertifiedNo) and L.labelings == []


# ---------------------------------------------------------------- solver

def test_fes_triangle_matches_dp():
    D = build(3, solid=[(0, 1), (1, 2), (0, 2)])
    assert fes_solve(D).verdict is dp_solve(D, ANY_STRICT).verdict
    D = Digraph(3, I2.arcs | {(2, 0)})
    res = fes_solve(D)
    assert res.verdict is dp_solve(D, ANY_STRICT).verdict
    if res.yes:
        assert check_realization(D, res.labeling, ANY_STRICT).ok


def test_fes_tree_delegates():
    res = fes_solve(I3)
    assert res.yes and "tree" in res.method


def test_fes_special_edge_other_variant_no():
    assert fes_solve(I3, PROPER).verdict is Verdict.NO


def test_fes_grid_cap_unknown():
    D = random_cycle_instance(0, 8)
    res = fes_solve(D, grid_cap=1)
    assert res.verdict is Verdict.UNKNOWN and "grid" in res.reason
    with pytest.raises(GridBudgetExceeded):
        solve_core(D, grid_cap=1)


@pytest.mark.parametrize("seed", range(6))
def test_fes_cycles_yes_and_frugal_on_connectors(seed):
    D = random_cycle_instance(seed, 10)
    res = fes_solve(D)
    assert res.yes and check_realization(D, res.labeling, ANY_STRICT).ok
    assert all(len(ls) <= 2 for ls in res.labeling.entries.values())
