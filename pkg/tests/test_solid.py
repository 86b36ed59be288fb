import random

import pytest
from hypothesis import given, settings, strategies as st

from rgr.core import ANY_STRICT, PROPER, SIMPLE_STRICT, UNDIRECTED_VARIANTS, Digraph
from rgr.exact import dp_solve
from rgr.solid import (BridgeKind, BudgetExceeded, NotCompleteDAG, bridges, bundled,
                       bundled_separated_conflicts, classified_bridges, classify_bridge, dashed_arcs,
                       dense_path_exists, directed_prune_checks, plausible_reachability, separated,
                       solid_graph, star_leaf_tournament)

from instances import C4, I1, I2, I3, build, random_tree, realizable_instance


def kind_of(D, e):
    return {b.edge: b.kind for b in classified_bridges(D)}[e]


def test_solid_graph_of_path_with_dashed_arc():
    assert solid_graph(I2).edges == {(0, 1), (1, 2)}
    assert dashed_arcs(I2) == {(0, 2)}


def test_directed_triangle_has_no_solid_edges():
    D = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    assert solid_graph(D).edges == set()
    assert dashed_arcs(D) == D.arcs


def test_solid_graph_of_I3():
    assert solid_graph(I3).edges == {(0, 1), (1, 2), (2, 3)}


def test_bridges_path_cycle_I3():
    P = build(5, solid=[(i, i + 1) for i in range(4)])
    assert [b.edge for b in bridges(solid_graph(P))] == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert bridges(solid_graph(C4)) == []
    bs = bridges(solid_graph(I3))
    assert len(bs) == 3
    b = next(b for b in bs if b.edge == (1, 2))
    assert b.side_u == {0, 1} and b.side_v == {2, 3}


def test_classify_examples():
    assert kind_of(I3, (1, 2)) is BridgeKind.SPECIAL
    assert kind_of(I3, (0, 1)) is BridgeKind.NONSPECIAL
    assert kind_of(I1, (0, 1)) is BridgeKind.NONSPECIAL


def test_plausible_on_I3():
    b = next(b for b in classified_bridges(I3) if b.edge == (1, 2))
    info = plausible_reachability(I3, b)
    assert info.ok
    assert info.classes_u[1] == {2, 3}
    assert info.classes_u[0] == {2}


def test_implausible_extra_pendant():
    D = build(5, solid=[(0, 1), (1, 2), (2, 3), (1, 4)],
              dashed=[(0, 2), (1, 3), (4, 3)])
    b = next(b for b in classified_bridges(D) if b.edge == (1, 2))
    assert b.special
    info = plausible_reachability(D, b)
    assert not info.ok and "4" in info.reason


def test_plausible_nonspecial_two_class_form():
    for b in classified_bridges(I1):
        assert plausible_reachability(I1, b).ok


def test_bundled_and_separated_examples():
    assert bundled(I1, 1, 0, 2)
    assert separated(I1, 1, 0, 2, PROPER)
    assert not separated(I1, 1, 0, 2, ANY_STRICT)
    assert separated(I2, 1, 0, 2, ANY_STRICT)
    assert not bundled(I2, 1, 0, 2)


def test_bundled_separated_conflict_for_proper_path():
    assert bundled_separated_conflicts(I1, PROPER) == [(0, 1, 2)]
    assert bundled_separated_conflicts(I1, ANY_STRICT) == []


def test_dense_path_examples():
    assert dense_path_exists(I2, 0, 2)
    assert not dense_path_exists(I1, 0, 2)
    assert not dense_path_exists(I3, 0, 3)
    assert not dense_path_exists(I2, 0, 2, forbidden=[1])


def test_dense_path_budget():
    # complete solid graph except the target is unreachable by any dense path
    n = 9
    D = build(n, solid=[(i, j) for i in range(n - 1) for j in range(i + 1, n - 1)] + [(n - 2, n - 1)])
    with pytest.raises(BudgetExceeded):
        dense_path_exists(D, 0, n - 1, forbidden=[n - 2], budget=50)


def test_star_leaf_tournament():
    D = build(3, dashed=[(1, 2)])
    assert star_leaf_tournament(D, 0, [1, 2]) == [1, 2]
    with pytest.raises(NotCompleteDAG):
        star_leaf_tournament(build(3), 0, [1, 2])
    D = build(4, dashed=[(1, 2), (2, 3), (1, 3)])
    assert star_leaf_tournament(D, 0, [3, 1, 2]) == [1, 2, 3]
    with pytest.raises(NotCompleteDAG):
        star_leaf_tournament(build(4, dashed=[(1, 2), (2, 3), (3, 1)]), 0, [1, 2, 3])


def test_directed_prune_cycle_of_untriangulated_arcs():
    D = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    facts = directed_prune_checks(D)
    assert facts.certified_no
    assert facts.unlabeled_cycles == [[0, 1, 2]]


def test_directed_prune_dag_has_no_cycle_facts():
    D = Digraph(3, frozenset({(0, 1), (1, 2), (0, 2)}))
    facts = directed_prune_checks(D)
    assert not facts.certified_no and facts.unlabeled_cycles == []
    assert facts.must_label == {(0, 1), (1, 2)}


def test_directed_prune_triangulated_cycle_not_certified():
    # 0->1->2->0 with a chord path 0->3->1 triangulating (0,1)
    D = Digraph(4, frozenset({(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)}))
    facts = directed_prune_checks(D)
    assert (0, 1) not in facts.must_label
    assert not facts.certified_no


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_classification_invariant_under_vertex_permutation(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    D = realizable_instance(rng, n, random_tree(rng, n), 2 * n)
    perm = list(range(n))
    rng.shuffle(perm)
    P = D.relabel(perm)
    kinds = {b.edge: b.kind for b in classified_bridges(D)}
    pk = {b.edge: b.kind for b in classified_bridges(P)}
    assert {(min(perm[u], perm[v]), max(perm[u], perm[v])): k for (u, v), k in kinds.items()} == pk
    for b in classified_bridges(D):
        assert classify_bridge(D, b) is b.kind


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_conflicting_pair_means_no(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 5)
    tree = random_tree(rng, n)
    others = [(u, v) for u in range(n) for v in range(n) if u != v
              and (min(u, v), max(u, v)) not in {(min(a, b), max(a, b)) for a, b in tree}]
    D = build(n, solid=tree, dashed=[a for a in others if rng.random() < 0.5])
    for variant in UNDIRECTED_VARIANTS:
        if bundled_separated_conflicts(D, variant):
            assert dp_solve(D, variant).verdict.value == "NO"


def test_simple_strict_separated_when_arc_exists():
    assert separated(I2, 1, 0, 2, SIMPLE_STRICT)
