"""Realizability when the solid graph is a tree: prechecks, star labeling and the exact LP."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .core import (ANY_STRICT, Digraph, Edge, Labeling, RealizeResult, Variant, Verdict,
                   check_realization)
from .decompose import CertifiedNo, exhaust_splits, recompose
from .labels import compress, frugalize
from .lp import EQ, GE, LinearProgram, solve_lp
from .solid import (BridgeKind, NotCompleteDAG, SolidGraph, classified_bridges, is_tree, side_of,
                    solid_graph, star_leaf_tournament)

Pins = Mapping[Edge, tuple[int, ...]]


def _ek(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class _TreeView:
    """Tree solid graph with edge kinds and all-pairs paths."""

    def __init__(self, D: Digraph) -> None:
        self.D = D
        self.G: SolidGraph = solid_graph(D)
        if not is_tree(self.G):
            raise ValueError("solid graph is not a tree")
        self.kind = {b.edge: b.kind for b in classified_bridges(D, self.G)}
        self.parent: list[list[int]] = []
        for r in range(D.n):
            par = [-1] * D.n
            par[r] = r
            stack = [r]
            while stack:
                x = stack.pop()
                for y in self.G.adj[x]:
                    if par[y] < 0:
                        par[y] = x
                        stack.append(y)
            self.parent.append(par)

    def special(self, e: Edge) -> bool:
        return self.kind[_ek(*e)] is BridgeKind.SPECIAL

    def path(self, u: int, v: int) -> list[int]:
        par = self.parent[v]
        out = [u]
        while out[-1] != v:
            out.append(par[out[-1]])
        return out

    def adjacent_pairs(self):
        for c in range(self.D.n):
            nb = sorted(self.G.adj[c])
            for i, u in enumerate(nb):
                for v in nb[i + 1:]:
                    yield u, c, v


def _minimal_nonarcs(T: _TreeView):
    """Non-arcs (u,v) at tree distance >= 3 whose path has every other forward pair present."""
    D = T.D
    for u in range(D.n):
        for v in range(D.n):
            if u == v or D.has(u, v):
                continue
            p = T.path(u, v)
            if len(p) < 4:
                continue
            ok = all(D.has(p[i], p[j]) for i in range(len(p)) for j in range(i + 1, len(p))
                     if (i, j) != (0, len(p) - 1))
            if ok:
                yield p


def tree_prechecks(D: Digraph, variant: Variant = ANY_STRICT) -> CertifiedNo | None:
    """Necessary conditions for realizability on a tree; None means all passed."""
    if variant.directed:
        raise ValueError("tree solver handles undirected variants only")
    T = _TreeView(D)
    if not variant.is_any_strict:
        for e, k in sorted(T.kind.items()):
            if k is BridgeKind.SPECIAL:
                return CertifiedNo(f"special edge {e} cannot be realized under {variant}")
    for u, c, v in T.adjacent_pairs():
        if not D.has(u, v) and not D.has(v, u):
            if not variant.strict or variant.proper:
                return CertifiedNo(f"edges {{{u},{c}}},{{{c},{v}}} need a shared label under {variant}")
            if T.special((u, c)) or T.special((c, v)):
                return CertifiedNo(f"adjacent edges at {c} without arc between {u},{v} must be non-special")
    for u, v in sorted(D.arcs):
        p = T.path(u, v)
        for w in p[1:-1]:
            if not (D.has(u, w) and D.has(w, v)):
                return CertifiedNo(f"arc ({u},{v}) needs ({u},{w}) and ({w},{v})")
    for p in _minimal_nonarcs(T):
        edges = [(p[i], p[i + 1]) for i in range(len(p) - 1)]
        if T.special(edges[0]) or T.special(edges[-1]):
            return CertifiedNo(f"minimal non-arc ({p[0]},{p[-1]}) has a special end edge")
        for e in edges[1:-1]:
            if not T.special(e):
                return CertifiedNo(f"minimal non-arc ({p[0]},{p[-1]}) has non-special inner edge {_ek(*e)}")
    return None


# ---------------------------------------------------------------- LP

@dataclass
class TreeLP:
    lp: LinearProgram
    var: dict[Edge, tuple[int, int]]
    pins: dict[Edge, tuple[int, ...]] = field(default_factory=dict)
    n: int = 0


DELTA = 1


def build_tree_lp(D: Digraph, prelabels: Pins | None = None) -> TreeLP:
    T = _TreeView(D)
    lp = LinearProgram()
    var: dict[Edge, tuple[int, int]] = {}
    for e in sorted(T.G.edges):
        var[e] = (lp.add_var(f"l{e}"), lp.add_var(f"h{e}"))
        lo, hi = var[e]
        if T.special(e):
            lp.add({hi: 1, lo: -1}, GE, DELTA, f"special {e}")
        else:
            lp.add({lo: 1, hi: -1}, EQ, 0, f"single {e}")
    for u, c, v in T.adjacent_pairs():
        e, f = var[_ek(u, c)], var[_ek(c, v)]
        if not D.has(u, v) and not D.has(v, u):
            lp.add({e[0]: 1, f[0]: -1}, EQ, 0, f"shared {u}-{c}-{v}")
            continue
        if D.has(v, u):
            e, f = f, e
        # e is the first edge of the reachable direction
        lp.add({f[1]: 1, e[0]: -1}, GE, DELTA, f"reach {u}-{c}-{v}")
        lp.add({f[0]: 1, e[1]: -1}, GE, 0, f"block {u}-{c}-{v}")
    for p in _minimal_nonarcs(T):
        edges = [_ek(p[i], p[i + 1]) for i in range(len(p) - 1)]
        for a, b in zip(edges, edges[1:]):
            lp.add({var[a][1]: 1, var[b][0]: -1}, EQ, 0, f"nonarc ({p[0]},{p[-1]})")
    seen = set()
    for u, v in sorted(D.arcs):
        p = T.path(u, v)
        edges = [_ek(p[i], p[i + 1]) for i in range(len(p) - 1)]
        single = [i for i, e in enumerate(edges) if not T.special(e)]
        for i, j in zip(single, single[1:]):
            seg = tuple(p[i:j + 2])
            if seg in seen:
                continue
            seen.add(seg)
            row: dict[int, int] = {}
            for k in range(i, j):
                row[var[edges[k + 1]][0]] = row.get(var[edges[k + 1]][0], 0) + 1
                row[var[edges[k]][1]] = row.get(var[edges[k]][1], 0) - 1
            lp.add(row, GE, DELTA, f"arc segment {seg}")
    pins = {}
    for e, labels in (prelabels or {}).items():
        e = _ek(*e)
        vals = tuple(sorted(set(labels)))
        if e not in var:
            raise ValueError(f"pinned edge {e} is not a solid edge")
        if len(vals) != (2 if T.special(e) else 1):
            raise ValueError(f"pin {vals} on {'special' if T.special(e) else 'non-special'} edge {e}")
        lo, hi = var[e]
        lp.add({lo: 1}, EQ, vals[0], f"pin {e}")
        lp.add({hi: 1}, EQ, vals[-1], f"pin {e}")
        pins[e] = vals
    return TreeLP(lp, var, pins, D.n)


def integerize(values: Mapping[Edge, tuple[Fraction, ...]], pins: Pins | None, n: int) -> Labeling:
    """Order-preserving integer labels; pinned values stay fixed."""
    pinned = sorted({Fraction(t) for ls in (pins or {}).values() for t in ls})
    if not pinned:
        return compress(values, n)
    distinct = sorted({Fraction(t) for ls in values.values() for t in ls} | set(pinned))
    target: dict[Fraction, int] = {}
    pin_set = set(pinned)
    nxt = 1
    for x in distinct:
        if x in pin_set:
            if x < nxt:
                raise ValueError("pins too close to place the free labels")
            target[x] = int(x)
            nxt = int(x) + 1
        else:
            target[x] = nxt
            nxt += 1
    return Labeling(n, {e: [target[Fraction(t)] for t in ls] for e, ls in values.items()})


def _lp_witness(tlp: TreeLP) -> Labeling | None:
    res = solve_lp(tlp.lp)
    if not res.feasible:
        return None
    vals = {}
    for e, (lo, hi) in tlp.var.items():
        vals[e] = tuple(sorted({res.values[lo], res.values[hi]}))
    return integerize(vals, tlp.pins, tlp.n)


# ---------------------------------------------------------------- combinatorial

def _star_labels(D: Digraph, G: SolidGraph, kind: dict[Edge, BridgeKind], u: int) -> dict[Edge, tuple[int, ...]]:
    order = star_leaf_tournament(D, u, sorted(G.adj[u]))
    side = {x: side_of(G, x, u) for x in order}
    into = {x: [w for w in side[x] if D.has(w, u)] for x in order}
    outof = {x: [y for y in side[x] if D.has(u, y)] for x in order}
    double = [kind[_ek(u, x)] is BridgeKind.SPECIAL for x in order]
    k = len(order)
    labels: list[tuple[int, ...]] = [(1, 2) if double[0] else (1,)]
    for i in range(1, k):
        prev, cur = order[i - 1], order[i]
        a = labels[-1][-1]
        if double[i - 1] and not double[i]:
            bundle = any(not D.has(w, cur) for w in into[prev])
            if not bundle and i + 1 < k and double[i + 1]:
                nxt = order[i + 1]
                bundle = any(not D.has(w, y) for w in into[prev] for y in outof[nxt])
            labels.append((a,) if bundle else (a + 1,))
        elif not double[i - 1] and not double[i]:
            labels.append((a + 1,))
        elif not double[i - 1]:
            bundle = any(not D.has(prev, w) for w in outof[cur])
            labels.append((a, a + 1) if bundle else (a + 1, a + 2))
        else:
            bundle = any(not D.has(w, y) for w in into[prev] for y in outof[cur])
            labels.append((a, a + 1) if bundle else (a + 1, a + 2))
    return {_ek(u, x): ls for x, ls in zip(order, labels)}


def label_simplified_tree(D: Digraph) -> Labeling | CertifiedNo:
    """Star-by-star labeling of a simplified tree instance, merged in DFS order."""
    G = solid_graph(D)
    if D.n <= 2:
        return Labeling(D.n, {e: [1] for e in G.edges})
    kind = {b.edge: b.kind for b in classified_bridges(D, G)}
    internal = [x for x in range(D.n) if G.degree(x) >= 2]
    stars = {}
    for u in internal:
        try:
            stars[u] = _star_labels(D, G, kind, u)
        except NotCompleteDAG as exc:
            return CertifiedNo(str(exc))
    final: dict[Edge, tuple[int, ...]] = {}
    seen = set()
    stack = [internal[0]]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        star = stars[u]
        offset = 0
        for e, ls in star.items():
            if e in final:
                offset = final[e][0] - ls[0]
                break
        for e, ls in star.items():
            final.setdefault(e, tuple(t + offset for t in ls))
        for x in sorted(G.adj[u], reverse=True):
            if x in stars and x not in seen:
                stack.append(x)
    low = min(t for ls in final.values() for t in ls)
    return Labeling(D.n, {e: [t - low + 1 for t in ls] for e, ls in final.items()})


def solve_tree_combinatorial(D: Digraph, variant: Variant = ANY_STRICT) -> RealizeResult:
    if not variant.is_any_strict or variant.directed:
        raise ValueError("the combinatorial tree algorithm is for AnyStrict")
    pre = tree_prechecks(D, variant)
    if pre is not None:
        return RealizeResult.no("tree-precheck", pre.reason)
    node = exhaust_splits(D, variant, split_special_bridges=False)
    if isinstance(node, CertifiedNo):
        return RealizeResult.no("tree-split", node.reason)

    def leaf(piece: Digraph) -> RealizeResult:
        lab = label_simplified_tree(piece)
        if isinstance(lab, CertifiedNo):
            return RealizeResult.no("tree-combinatorial", lab.reason)
        chk = check_realization(piece, lab, variant)
        if not chk:
            return RealizeResult.no("tree-combinatorial", f"star labeling fails: {chk.mismatch}")
        return RealizeResult(Verdict.YES, lab, "tree-combinatorial")

    return recompose(node, leaf, variant)


def solve_tree(D: Digraph, variant: Variant = ANY_STRICT, prelabels: Pins | None = None,
               method: str = "auto") -> RealizeResult:
    """Decide a tree-solid instance; YES witnesses are certified."""
    if variant.directed:
        raise ValueError("tree solver handles undirected variants only")
    if D.n == 1:
        return RealizeResult(Verdict.YES, Labeling(1), "tree")
    pre = tree_prechecks(D, variant)
    if pre is not None:
        return RealizeResult.no("tree-precheck", pre.reason)
    use_lp = method == "lp" or bool(prelabels) or not variant.is_any_strict
    if not use_lp:
        res = solve_tree_combinatorial(D, variant)
    else:
        lab = _lp_witness(build_tree_lp(D, prelabels))
        if lab is None:
            return RealizeResult.no("tree-lp", "LP infeasible")
        chk = check_realization(D, lab, variant)
        if not chk:
            return RealizeResult.no("tree-lp", f"LP labeling fails: {chk.mismatch}")
        res = RealizeResult(Verdict.YES, lab, "tree-lp")
    if res.yes and not prelabels:
        res.labeling = frugalize(D, res.labeling, variant)
    return res
