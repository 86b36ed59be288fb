"""Acceptance criteria 1-8, one test per criterion (criterion 7 has a slow companion)."""
import itertools
import random
import time

import networkx as nx
import pytest

from rgr.core import (ALL_VARIANTS, ANY_STRICT, DIRECTED_VARIANTS, UNDIRECTED_VARIANTS, Digraph,
                      LabelClass, Labeling, Verdict, check_realization, reachability)
from rgr.decompose import CertifiedNo, exhaust_splits, recompose
from rgr.exact import dp_solve, oracle_solve
from rgr.fes import fes_solve
from rgr.gen import SetCoverInstance, gen_book, gen_sat_directed, gen_sat_trianglefree, gen_setcover
from rgr.labels import frugality_violations
from rgr.solid import bridges, bundled, classified_bridges, has_triangle, separated, solid_graph
from rgr.solve import feedback_edge_number, solve
from rgr.tree import solve_tree

from instances import dpll, full_assignment, random_2p2n, random_labeling, random_tree_instance
from oracles import walk_reachability


def report(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")


def triangle_free_bounds(D: Digraph, variant) -> tuple[int, int]:
    """(beta, lambda) under which the bounded oracle is exhaustive on triangle-free instances."""
    need = 2 if variant.is_any_strict else 1
    return need, max(1, need * len(solid_graph(D).edges))


def random_graph(rng: random.Random, n: int, extra: int) -> list[tuple[int, int]]:
    """Random tree on n vertices plus `extra` further edges."""
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    others = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(others)
    return sorted(edges | set(others[:extra]))


def random_instance(rng: random.Random, n: int, edges, strict: bool, flips: int) -> Digraph:
    """Reachability graph of a random labeling of `edges`, with up to `flips` one-way arcs toggled."""
    lab = Labeling(n)
    for e in edges:
        lab.set(*e, rng.sample(range(1, 2 * len(edges) + 1), rng.randint(1, 2)))
    arcs = set(reachability(lab, strict).arcs)
    for _ in range(flips):
        u, v = rng.sample(range(n), 2)
        if (v, u) not in arcs:
            arcs ^= {(u, v)}
    return Digraph(n, frozenset(arcs))


# ---------------------------------------------------------------- 1

def test_criterion_1_checker_matches_walk_enumerator():
    t0 = time.perf_counter()
    rng = random.Random(1)
    for _ in range(500):
        n = rng.randint(1, 5)
        lab = random_labeling(rng, n, 6, 4, directed=rng.random() < 0.3, max_per_edge=4)
        for strict in (True, False):
            assert reachability(lab, strict).arcs == walk_reachability(lab, strict).arcs, (lab, strict)
    elapsed = time.perf_counter() - t0
    report(1, elapsed < 10, f"500 graphs, {elapsed:.1f}s")
    assert elapsed < 10


# ---------------------------------------------------------------- 2

def non_tree_pairs(n: int, tree: list[tuple[int, int]]) -> list[tuple[int, int]]:
    tset = {(min(u, v), max(u, v)) for u, v in tree}
    return [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in tset]


def tree_pattern(n: int, tree: list[tuple[int, int]], choice) -> Digraph:
    """Tree edges solid; each non-tree pair gets no arc (0), u->v (1) or v->u (2)."""
    arcs = {a for u, v in tree for a in ((u, v), (v, u))}
    for (u, v), c in zip(non_tree_pairs(n, tree), choice):
        if c:
            arcs.add((u, v) if c == 1 else (v, u))
    return Digraph(n, frozenset(arcs))


def tree_patterns(n: int, tree: list[tuple[int, int]]):
    for choice in itertools.product(range(3), repeat=len(non_tree_pairs(n, tree))):
        yield tree_pattern(n, tree, choice)


def tree_corpus(per_variant_cap: int = 5000, sampled_n6: int = 5000) -> list[Digraph]:
    out = [Digraph(1, frozenset())]
    for n in range(2, 6):
        for T in nx.nonisomorphic_trees(n):
            out.extend(tree_patterns(n, list(T.edges())))
    rng = random.Random(2)
    trees6 = [list(T.edges()) for T in nx.nonisomorphic_trees(6)]
    for i in range(min(sampled_n6, per_variant_cap - len(out))):
        if i % 2:
            out.append(random_tree_instance(rng, 6))
        else:
            tree = rng.choice(trees6)
            out.append(tree_pattern(6, tree, [rng.randrange(3) for _ in non_tree_pairs(6, tree)]))
    return out


def test_criterion_2_tree_solver_matches_oracle():
    t0 = time.perf_counter()
    corpus = tree_corpus()
    assert len(corpus) <= 5000
    yes = 0
    for variant in UNDIRECTED_VARIANTS:
        beta = 2 if variant.is_any_strict else 1
        for D in corpus:
            ref = oracle_solve(D, variant, beta, max(1, 2 * (D.n - 1)))
            got = solve_tree(D, variant)
            assert ref.verdict is not Verdict.UNKNOWN
            assert got.verdict is ref.verdict, (sorted(D.arcs), variant, got.reason)
            if got.yes:
                yes += 1
                assert check_realization(D, got.labeling, variant)
    elapsed = time.perf_counter() - t0
    report(2, elapsed < 300, f"{len(corpus)} instances x 6 variants, {yes} YES, {elapsed:.0f}s")
    assert elapsed < 300


# ---------------------------------------------------------------- 3

def dp_corpus() -> list[Digraph]:
    pairs3 = [(u, v) for u in range(3) for v in range(3) if u != v]
    out = [Digraph(3, frozenset(a for a, keep in zip(pairs3, mask) if keep))
           for mask in itertools.product((0, 1), repeat=len(pairs3))]
    rng = random.Random(3)
    pairs4 = [(u, v) for u in range(4) for v in range(4) if u != v]
    sample: list[Digraph] = []
    while len(sample) < 400:
        kind = len(sample) % 4
        if kind < 2:
            D = Digraph(4, frozenset(a for a in pairs4 if rng.random() < 0.5))
        else:
            lab = random_labeling(rng, 4, 5, 5, directed=kind == 3, max_per_edge=2)
            D = reachability(lab, rng.random() < 0.5)
        if not has_triangle(solid_graph(D)):
            sample.append(D)
    return out + sample


def test_criterion_3_dp_matches_oracle():
    t0 = time.perf_counter()
    corpus = dp_corpus()
    # every variant is cross-checked, which covers the eight non-trivial ones
    trivial = [v for v in DIRECTED_VARIANTS if v.strict and v.label_class in (LabelClass.ANY, LabelClass.SIMPLE)]
    assert len(trivial) == 2
    counts = {}
    for variant in ALL_VARIANTS:
        counts[variant.name] = 0
        for D in corpus:
            ref = oracle_solve(D, variant)
            got = dp_solve(D, variant)
            assert ref.verdict is not Verdict.UNKNOWN
            assert got.verdict is ref.verdict, (sorted(D.arcs), variant)
            if got.yes:
                counts[variant.name] += 1
                assert check_realization(D, got.labeling, variant)
    for variant in trivial:
        assert counts[variant.name] == len(corpus)
    elapsed = time.perf_counter() - t0
    report(3, elapsed < 600, f"{len(corpus)} instances, YES counts {counts}, {elapsed:.0f}s")
    assert elapsed < 600


# ---------------------------------------------------------------- 4

def test_criterion_4_book_family():
    t0 = time.perf_counter()
    for L in (5, 6, 7, 8):
        g = gen_book(L)
        assert g.D.n == 4 * L - 6
        assert len(solid_graph(g.D).edges) == 7 * L - 19
        assert check_realization(g.D, g.witness, ANY_STRICT)
        s = g.certificates["spine"]
        spine = g.witness.get(*s)
        assert len(spine) == L - 2
        for t in spine:
            lab = g.witness.copy()
            lab.set(*s, [x for x in spine if x != t])
            assert not check_realization(g.D, lab, ANY_STRICT), (L, t)
    elapsed = time.perf_counter() - t0
    report(4, elapsed < 5, f"L=5..8, {elapsed:.2f}s")
    assert elapsed < 5


# ---------------------------------------------------------------- 5

def random_setcover(rng: random.Random) -> tuple[SetCoverInstance, list[int]]:
    universe = list(range(rng.randint(1, 4)))
    sets = [rng.sample(universe, rng.randint(1, len(universe))) for _ in range(rng.randint(1, 4))]
    for x in universe:
        if not any(x in F for F in sets):
            sets[rng.randrange(len(sets))].append(x)
    # greedy cover, then k is its size
    cover, left = [], set(universe)
    while left:
        best = max(range(len(sets)), key=lambda i: len(left & set(sets[i])))
        cover.append(best)
        left -= set(sets[best])
    return SetCoverInstance(tuple(universe), tuple(tuple(F) for F in sets), len(cover)), cover


def test_criterion_5_reduction_witnesses():
    t0 = time.perf_counter()
    rng = random.Random(5)
    formulas = 0
    while formulas < 20:
        phi = random_2p2n(rng, rng.randint(1, 6))
        partial = dpll(list(phi.clauses))
        if partial is None:
            continue
        formulas += 1
        sigma = full_assignment(phi, partial)
        assert phi.satisfied_by(sigma)
        g = gen_sat_trianglefree(phi, sigma)
        assert g.variants
        for v in g.variants:
            assert check_realization(g.D, g.witness, v), v
        assert g.certificates["triangle_free"] and not has_triangle(solid_graph(g.D))
        d = gen_sat_directed(phi, sigma)
        assert d.variants
        for v in d.variants:
            assert check_realization(d.D, d.witness, v), v
        fas = d.certificates["feedback_arc_set"]
        assert len(fas) == 3 and d.certificates["feedback_arc_set_valid"]
        assert nx.is_directed_acyclic_graph(nx.DiGraph(list(d.D.arcs - set(fas))))
    for _ in range(10):
        inst, cover = random_setcover(rng)
        g = gen_setcover(inst, cover)
        for v in g.variants:
            assert check_realization(g.D, g.witness, v), v
    elapsed = time.perf_counter() - t0
    report(5, elapsed < 60, f"20 formulas, 10 set covers, {elapsed:.1f}s")
    assert elapsed < 60


# ---------------------------------------------------------------- 6

def test_criterion_6_splitting_preserves_verdicts():
    t0 = time.perf_counter()
    rng = random.Random(6)
    done = split = 0
    while done < 300:
        n = rng.randint(3, 6)
        D = random_instance(rng, n, random_graph(rng, n, rng.randint(0, 2)), rng.random() < 0.7,
                            rng.choice((0, 0, 1, 2)))
        G = solid_graph(D)
        if has_triangle(G) or not bridges(G):
            continue
        done += 1
        for variant in UNDIRECTED_VARIANTS:
            ref = oracle_solve(D, variant, *triangle_free_bounds(D, variant))
            assert ref.verdict is not Verdict.UNKNOWN
            root = exhaust_splits(D, variant)
            if isinstance(root, CertifiedNo):
                assert not ref.yes, (sorted(D.arcs), variant, root.reason)
                continue
            leaves = [oracle_solve(x.D, variant, *triangle_free_bounds(x.D, variant)) for x in root.leaves()]
            assert all(r.verdict is not Verdict.UNKNOWN for r in leaves)
            assert all(r.yes for r in leaves) == ref.yes, (sorted(D.arcs), variant)
            split += len(leaves) > 1
            if ref.yes:
                merged = recompose(root, lambda P: oracle_solve(P, variant, *triangle_free_bounds(P, variant)),
                                   variant)
                assert check_realization(D, merged.labeling, variant)
    elapsed = time.perf_counter() - t0
    report(6, elapsed < 120, f"300 instances, {split} multi-piece, {elapsed:.1f}s")
    assert elapsed < 120


# ---------------------------------------------------------------- 7

def test_criterion_7_fes_matches_dp():
    rng = random.Random(7)
    counts = {Verdict.YES: 0, Verdict.NO: 0}
    worst = 0.0
    # the reference verdict balances the sample between YES and NO
    while sum(counts.values()) < 200:
        n = rng.randint(4, 7)
        D = random_instance(rng, n, random_graph(rng, n, rng.randint(1, 2)), True, rng.randint(0, 3))
        if len(D.arcs) > 18 or not 1 <= feedback_edge_number(D) <= 2:
            continue
        ref = dp_solve(D, ANY_STRICT)
        if counts[ref.verdict] >= 100:
            continue
        counts[ref.verdict] += 1
        t0 = time.perf_counter()
        got = fes_solve(D, ANY_STRICT)
        worst = max(worst, time.perf_counter() - t0)
        assert got.verdict is ref.verdict, sorted(D.arcs)
        if got.yes:
            assert check_realization(D, got.labeling, ANY_STRICT)
    report(7, worst < 60, f"{counts[Verdict.YES]} YES, {counts[Verdict.NO]} NO, slowest {worst:.2f}s")
    assert worst < 60


@pytest.mark.slow
def test_criterion_7b_book5_via_fes():
    g = gen_book(5)
    res = fes_solve(g.D, ANY_STRICT, grid_cap=10 ** 7)
    ok = res.yes and check_realization(g.D, res.labeling, ANY_STRICT).ok
    report(7, ok, f"BOOK(5) via fes: {res.verdict.name}")
    assert ok


# ---------------------------------------------------------------- 8

def pair_violations(D: Digraph, lab: Labeling, variant) -> list[str]:
    G = solid_graph(D)
    kinds = {b.edge: b.kind for b in classified_bridges(D, G)}
    out = []
    for c in range(D.n):
        nb = [w for w in sorted(G.adj[c]) if (min(w, c), max(w, c)) in kinds]
        for i, u in enumerate(nb):
            for v in nb[i + 1:]:
                common = set(lab.get(u, c)) & set(lab.get(c, v))
                if bundled(D, c, u, v, G) and not common:
                    out.append(f"bundled {u},{c},{v} share no label")
                if separated(D, c, u, v, variant, G, kinds) and common:
                    out.append(f"separated {u},{c},{v} share a label")
    return out


def test_criterion_8_frugal_witnesses():
    rng = random.Random(8)
    corpus = [gen_book(5).D]
    corpus += [random_tree_instance(rng, rng.randint(2, 7)) for _ in range(60)]
    while len(corpus) < 200:
        n = rng.randint(3, 6)
        D = random_instance(rng, n, random_graph(rng, n, rng.randint(0, 2)), rng.random() < 0.7, 0)
        # keep within the dp budget so every variant gets an exact verdict quickly
        if len(D.arcs) <= 22:
            corpus.append(D)
    witnesses = 0
    for D in corpus:
        for variant in UNDIRECTED_VARIANTS:
            res = solve(D, variant)
            if not res.yes:
                continue
            witnesses += 1
            assert check_realization(D, res.labeling, variant)
            bad = frugality_violations(D, res.labeling) + pair_violations(D, res.labeling, variant)
            assert not bad, (sorted(D.arcs), variant, bad)
    report(8, True, f"{witnesses} witnesses")
    assert witnesses > 0
