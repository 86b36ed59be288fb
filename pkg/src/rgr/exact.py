"""Exact solvers: directed trivial cases, the snapshot dynamic program and a bounded oracle."""
from __future__ import annotations

import os
import time
from collections import deque
from dataclasses import dataclass

from .core import (Digraph, Edge, LabelClass, Labeling, RealizeResult, Variant, Verdict,
                   check_realization)
from .solid import bits, has_triangle, solid_graph

DEFAULT_ARC_BUDGET = 22


class ArcBudgetExceeded(RuntimeError):
    pass


def arc_budget() -> int:
    raw = os.environ.get("RGR_ARC_BUDGET")
    return int(raw) if raw else DEFAULT_ARC_BUDGET


# ---------------------------------------------------------------- trivial directed cases

def topological_order(D: Digraph) -> list[int] | None:
    indeg = [bin(D.in_mask[v]).count("1") for v in range(D.n)]
    queue = deque(v for v in range(D.n) if indeg[v] == 0)
    order = []
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in D.out_neighbors(x):
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return order if len(order) == D.n else None


def is_transitive(D: Digraph) -> bool:
    for u, v in D.arcs:
        if D.out_mask[v] & ~D.out_mask[u] & ~(1 << u):
            return False
    return True


def trivial_directed(D: Digraph, variant: Variant) -> RealizeResult | None:
    """Witness for the easy directed cases, or None when none applies."""
    if not variant.directed:
        raise ValueError("trivial_directed expects a directed variant")
    lab = None
    method = ""
    if variant.strict and variant.label_class in (LabelClass.ANY, LabelClass.SIMPLE):
        lab = Labeling(D.n, {a: [1] for a in D.arcs}, directed=True)
        method = "directed-label-one"
    elif (order := topological_order(D)) is not None:
        # later vertices get smaller blocks, so no two arcs chain
        lab = Labeling(D.n, directed=True)
        for pos, x in enumerate(order):
            base = (D.n - 1 - pos) * D.n
            for j, y in enumerate(D.out_neighbors(x)):
                lab.set(x, y, [base + j + 1])
        method = "directed-dag"
    elif is_transitive(D):
        lab = Labeling(D.n, {a: [i + 1] for i, a in enumerate(sorted(D.arcs))}, directed=True)
        method = "directed-transitive"
    if lab is None:
        return None
    chk = check_realization(D, lab, variant)
    if not chk:
        raise AssertionError(f"trivial construction failed: {chk.mismatch}")
    return RealizeResult(Verdict.YES, lab, method)


# ---------------------------------------------------------------- shared snapshot machinery

@dataclass
class _Setup:
    D: Digraph
    variant: Variant
    edges: list[Edge]             # labelable edges (solid edges or arcs)
    target: tuple[int, ...]
    start: tuple[int, ...]


def _setup(D: Digraph, variant: Variant) -> _Setup:
    if variant.directed:
        edges = sorted(D.arcs)
    else:
        edges = sorted(solid_graph(D).edges)
    target = tuple(D.out_mask[x] | 1 << x for x in range(D.n))
    start = tuple(1 << x for x in range(D.n))
    return _Setup(D, variant, edges, target, start)


def _neighbor_masks(st: _Setup, idxs) -> list[int]:
    nb = [0] * st.D.n
    for i in idxs:
        u, v = st.edges[i]
        nb[u] |= 1 << v
        if not st.variant.directed:
            nb[v] |= 1 << u
    return nb


def _step(st: _Setup, R: tuple[int, ...], idxs) -> tuple[int, ...] | None:
    """Reach state after one snapshot, or None if it overshoots D."""
    nb = _neighbor_masks(st, idxs)
    out = []
    for x, m in enumerate(R):
        if st.variant.strict:
            add = 0
            for a in bits(m):
                add |= nb[a]
            new = m | add
        else:
            new = m
            frontier = m
            while frontier:
                add = 0
                for a in bits(frontier):
                    add |= nb[a]
                frontier = add & ~new
                new |= add
        if new & ~st.target[x]:
            return None
        out.append(new)
    return tuple(out)


def _class_ok(st: _Setup, idxs: list[int]) -> bool:
    if not st.variant.proper:
        return True
    if st.variant.directed:
        arcs = [st.edges[i] for i in idxs]
        # no two consecutive arcs (x,y),(y,z) with z != x
        return not any(y == y2 and z != x for x, y in arcs for y2, z in arcs)
    seen = set()
    for i in idxs:
        u, v = st.edges[i]
        if u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def _snapshots(st: _Setup, R: tuple[int, ...], allowed: list[int]):
    """Yield (idxs, R') for nonempty snapshots over allowed edges that change R validly."""
    safe = [i for i in allowed if (r := _step(st, R, [i])) is not None and r != R]
    k = len(safe)
    for mask in range(1, 1 << k):
        idxs = [safe[j] for j in range(k) if mask >> j & 1]
        if not _class_ok(st, idxs):
            continue
        R2 = _step(st, R, idxs)
        if R2 is not None and R2 != R:
            yield idxs, R2


def _labeling_from(st: _Setup, seq: list[list[int]]) -> Labeling:
    lab = Labeling(st.D.n, directed=st.variant.directed)
    for t, idxs in enumerate(seq, start=1):
        for i in idxs:
            u, v = st.edges[i]
            lab.set(u, v, lab.get(u, v) + (t,))
    return lab


# ---------------------------------------------------------------- dynamic program

def dp_solve(D: Digraph, variant: Variant, budget: int | None = None) -> RealizeResult:
    """Breadth-first search over reach states; exact for every variant."""
    t0 = time.perf_counter()
    budget = arc_budget() if budget is None else budget
    if len(D.arcs) > budget:
        raise ArcBudgetExceeded(f"{len(D.arcs)} arcs exceed the dp budget of {budget}")
    st = _setup(D, variant)
    simple = variant.simple
    start = (st.start, 0)
    parent: dict = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        state = queue.popleft()
        R, used = state
        if R == st.target:
            goal = state
            break
        allowed = [i for i in range(len(st.edges)) if not (simple and used >> i & 1)]
        for idxs, R2 in _snapshots(st, R, allowed):
            used2 = used
            if simple:
                for i in idxs:
                    used2 |= 1 << i
            nxt = (R2, used2)
            if nxt not in parent:
                parent[nxt] = (state, idxs)
                queue.append(nxt)
    stats = {"states": len(parent), "seconds": time.perf_counter() - t0}
    if goal is None:
        return RealizeResult(Verdict.NO, None, "dp", "no snapshot sequence reaches D", stats)
    seq = []
    cur = goal
    while parent[cur] is not None:
        prev, idxs = parent[cur]
        seq.append(idxs)
        cur = prev
    lab = _labeling_from(st, seq[::-1])
    chk = check_realization(D, lab, variant)
    if not chk:
        raise AssertionError(f"dp witness failed: {chk.mismatch}")
    return RealizeResult(Verdict.YES, lab, "dp", "", stats)


# ---------------------------------------------------------------- bounded oracle

def oracle_sufficient(D: Digraph, variant: Variant, beta: int, lam: int) -> bool:
    """Whether searching <= beta labels per edge within [1, lam] is exhaustive for D."""
    arcs = len(D.arcs)
    per_edge = 1 if variant.simple else arcs
    if lam >= arcs and beta >= per_edge:
        return True
    if not variant.directed:
        G = solid_graph(D)
        if not has_triangle(G):
            need = 2 if variant.is_any_strict else 1
            return beta >= need and lam >= need * len(G.edges)
    return False


def oracle_solve(D: Digraph, variant: Variant, beta: int | None = None, lam: int | None = None,
                 node_budget: int = 2_000_000) -> RealizeResult:
    """Enumerate compressed labelings with <= beta labels per edge drawn from [1, lam]."""
    t0 = time.perf_counter()
    st = _setup(D, variant)
    if beta is None:
        beta = 1 if variant.simple else max(1, len(D.arcs))
    if variant.simple:
        beta = min(beta, 1)
    if lam is None:
        lam = len(D.arcs)
    nedges = len(st.edges)
    dead: dict = {}
    nodes = 0
    seq: list[list[int]] = []

    def dfs(R: tuple[int, ...], counts: tuple[int, ...], remaining: int) -> bool:
        nonlocal nodes
        if R == st.target:
            return True
        if remaining == 0:
            return False
        key = (R, counts)
        if dead.get(key, -1) >= remaining:
            return False
        nodes += 1
        if nodes > node_budget:
            raise _OutOfBudget
        allowed = [i for i in range(nedges) if counts[i] < beta]
        for idxs, R2 in _snapshots(st, R, allowed):
            c2 = list(counts)
            for i in idxs:
                c2[i] += 1
            seq.append(idxs)
            if dfs(R2, tuple(c2), remaining - 1):
                return True
            seq.pop()
        dead[key] = max(dead.get(key, -1), remaining)
        return False

    try:
        found = dfs(st.start, (0,) * nedges, lam)
    except _OutOfBudget:
        return RealizeResult(Verdict.UNKNOWN, None, "oracle", "node budget exhausted",
                             {"nodes": nodes, "seconds": time.perf_counter() - t0})
    stats = {"nodes": nodes, "seconds": time.perf_counter() - t0, "beta": beta, "lambda": lam}
    if found:
        lab = _labeling_from(st, seq)
        chk = check_realization(D, lab, variant)
        if not chk:
            raise AssertionError(f"oracle witness failed: {chk.mismatch}")
        return RealizeResult(Verdict.YES, lab, "oracle", "", stats)
    if oracle_sufficient(D, variant, beta, lam):
        return RealizeResult(Verdict.NO, None, "oracle", "exhaustive within sufficient bounds", stats)
    return RealizeResult(Verdict.UNKNOWN, None, "oracle", "bounds not known to be sufficient", stats)


class _OutOfBudget(Exception):
    pass
