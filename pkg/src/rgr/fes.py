"""Undirected solver parameterized by the feedback edge set number of the solid graph.

Pipeline: bridge splits, pendant normalization and shrinking, the anchor set W* with nice
connectors, connector labeling sets L_P from auxiliary tree instances, and a time-ordered
enumeration of labelings of the edges E* around W*.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable
from itertools import product

from .core import (ANY_STRICT, Digraph, Edge, Labeling, RealizeResult, Variant, Verdict,
                   check_realization)
from .decompose import (CertifiedNo, SplitNode, exhaust_splits, recompose, split_special)
from .exact import _class_ok, _Setup, _step
from .labels import MonotoneMap, compress, frugalize, lift
from .solid import (BridgeKind, NotCompleteDAG, SolidGraph, bits, bundled_separated_conflicts,
                    classified_bridges, components, dense_path_exists, is_dense_path, is_forest,
                    is_tree, solid_graph, star_leaf_tournament)
from .tree import solve_tree

DEFAULT_GRID_CAP = 10_000
DEFAULT_NODE_BUDGET = 500_000


class GridBudgetExceeded(RuntimeError):
    pass


class _OutOfNodes(Exception):
    pass


def _ek(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------- decomposition

@dataclass
class Connector:
    """A W-connector: path a..b in G[V*] with interior outside W, plus its extension tree."""

    path: tuple[int, ...]
    tree: frozenset[int]
    robust: bool | None = None
    nice: bool | None = None

    @property
    def a(self) -> int:
        return self.path[0]

    @property
    def b(self) -> int:
        return self.path[-1]

    @property
    def a1(self) -> int:
        return self.path[1]

    @property
    def b1(self) -> int:
        return self.path[-2]

    @property
    def length(self) -> int:
        return len(self.path) - 1

    @property
    def trivial(self) -> bool:
        return self.length <= 3

    @property
    def interior(self) -> frozenset[int]:
        return self.tree - {self.a, self.b}

    @property
    def boundary(self) -> tuple[Edge, Edge]:
        return _ek(self.a, self.a1), _ek(self.b1, self.b)

    def edges(self, G: SolidGraph) -> list[Edge]:
        return sorted(e for e in G.edges if e[0] in self.tree and e[1] in self.tree
                      and not (e[0] in (self.a, self.b) and e[1] in (self.a, self.b)))

    def reversed(self) -> "Connector":
        return Connector(self.path[::-1], self.tree, self.robust, self.nice)


@dataclass
class FesDecomposition:
    G: SolidGraph
    F: list[Edge]
    X: frozenset[int]
    core: frozenset[int]                   # V*, the 2-core
    pendant: dict[int, frozenset[int]]     # root v -> V_v (pendant tree without its root)
    Y2: frozenset[int]
    Y3: frozenset[int]
    Xstar: frozenset[int]
    connectors: list[Connector] = field(default_factory=list)   # X*-connectors
    Wstar: frozenset[int] | None = None
    w_connectors: list[Connector] = field(default_factory=list)

    @property
    def fes(self) -> int:
        return len(self.F)

    def core_adj(self, v: int) -> frozenset[int]:
        return self.G.adj[v] & self.core

    def core_degree(self, v: int) -> int:
        return len(self.core_adj(v))

    def root_of(self, x: int) -> int:
        if x in self.core:
            return x
        for r, vs in self.pendant.items():
            if x in vs:
                return r
        raise KeyError(x)


def two_core(G: SolidGraph) -> frozenset[int]:
    deg = [G.degree(v) for v in range(G.n)]
    alive = [True] * G.n
    stack = [v for v in range(G.n) if deg[v] < 2]
    while stack:
        x = stack.pop()
        if not alive[x]:
            continue
        alive[x] = False
        for y in G.adj[x]:
            if alive[y]:
                deg[y] -= 1
                if deg[y] < 2:
                    stack.append(y)
    return frozenset(v for v in range(G.n) if alive[v])


def _spanning_forest_complement(G: SolidGraph) -> list[Edge]:
    seen = [False] * G.n
    tree: set[Edge] = set()
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        for x in queue:
            for y in sorted(G.adj[x]):
                if not seen[y]:
                    seen[y] = True
                    tree.add(_ek(x, y))
                    queue.append(y)
    return sorted(G.edges - tree)


def _pendant_trees(G: SolidGraph, core: frozenset[int]) -> dict[int, frozenset[int]]:
    owner = {v: v for v in core}
    queue = sorted(core)
    for x in queue:
        for y in sorted(G.adj[x]):
            if y not in owner:
                owner[y] = owner[x]
                queue.append(y)
    out: dict[int, set[int]] = {v: set() for v in core}
    for x, r in owner.items():
        if x != r:
            out[r].add(x)
    return {v: frozenset(s) for v, s in out.items()}


def connectors_for(dec: FesDecomposition, W: frozenset[int]) -> list[Connector]:
    """All W-connectors, each listed once."""
    out = []
    seen = set()
    for w in sorted(W):
        for y in sorted(dec.core_adj(w)):
            if y in W:
                continue
            path = [w, y]
            while path[-1] not in W:
                nxt = [z for z in dec.core_adj(path[-1]) if z != path[-2]]
                if len(nxt) != 1:
                    raise AssertionError(f"connector vertex {path[-1]} has core degree != 2")
                path.append(nxt[0])
            key = tuple(path) if path[0] < path[-1] or (path[0] == path[-1] and path[1] < path[-2]) \
                else tuple(path[::-1])
            if key in seen:
                continue
            seen.add(key)
            tree = set(key)
            for q in key[1:-1]:
                tree |= dec.pendant[q]
            out.append(Connector(key, frozenset(tree)))
    return out


def compute_decomposition(D: Digraph) -> FesDecomposition | CertifiedNo:
    """F, X, V*, pendant trees, Y2, Y3, X* and the X*-connectors of a connected instance."""
    G = solid_graph(D)
    comps = components(G)
    if len(comps) > 1:
        where = {x: i for i, c in enumerate(comps) for x in c}
        for x, y in sorted(D.arcs):
            if where[x] != where[y]:
                return CertifiedNo(f"arc ({x},{y}) joins different solid components")
        raise ValueError("solid graph is disconnected; split components first")
    F = _spanning_forest_complement(G)
    X = frozenset(x for e in F for x in e)
    core = two_core(G)
    pendant = _pendant_trees(G, core)
    Fset = set(F)
    tree_deg = {v: sum(1 for y in G.adj[v] if y in core and _ek(v, y) not in Fset) for v in core}
    Y3 = frozenset(v for v in core if tree_deg[v] >= 3)
    base = X | Y3
    Y2 = frozenset(y for x in base for y in G.adj[x] if y in core and y not in base)
    dec = FesDecomposition(G, F, X, core, pendant, Y2, Y3, base | Y2)
    dec.connectors = connectors_for(dec, dec.Xstar)
    return dec


# ---------------------------------------------------------------- pendant normalization

def _needs_pendant_split(G: SolidGraph, v: int, b: int, side_b: frozenset[int]) -> bool:
    """A special root bridge {v,b} whose far side is more than b with at most two leaves."""
    children = [x for x in G.adj[b] if x != v]
    return len(children) > 2 or any(G.degree(x) > 1 for x in children) or len(side_b) > 1 + len(children)


def normalize_pendants(D: Digraph, variant: Variant) -> SplitNode | CertifiedNo:
    """Split until every pendant tree has depth <= 2 with special root bridges ending in leaves."""
    node = exhaust_splits(D, variant)
    if isinstance(node, CertifiedNo):
        return node
    return _refine(node, variant)


def _refine(node: SplitNode, variant: Variant) -> SplitNode | CertifiedNo:
    if node.op != "leaf":
        for i, c in enumerate(node.children):
            r = _refine(c, variant)
            if isinstance(r, CertifiedNo):
                return r
            node.children[i] = r
        return node
    D = node.D
    G = solid_graph(D)
    if is_forest(G):
        return node
    core = two_core(G)
    for br in classified_bridges(D, G):
        if (br.u in core) == (br.v in core):
            continue
        b = br if br.u in core else br.oriented(br.v)
        if not b.special or not _needs_pendant_split(G, b.u, b.v, b.side_v):
            continue
        out = split_special(D, b.u, b.v, variant)
        if isinstance(out, CertifiedNo):
            return out
        core_piece, tree_piece = out.pieces
        child = normalize_pendants(core_piece.D, variant)
        if isinstance(child, CertifiedNo):
            return child
        return SplitNode(D, "special", [child, SplitNode(tree_piece.D)],
                         [core_piece.old, tree_piece.old], outcome=out)
    return node


# ---------------------------------------------------------------- pendant shrinking

@dataclass
class StarInfo:
    """Root v of a pendant tree with its bridge vertices in tournament order."""

    v: int
    order: list[int]                       # b_v^1 .. b_v^m
    marked: set[int] = field(default_factory=set)   # 0-based indices surrounding or blocking
    surround: dict[int, list[int]] = field(default_factory=dict)   # external u -> indices
    block: dict[int, tuple[int, int]] = field(default_factory=dict)


def _pattern(D: Digraph, u: int, order: list[int]) -> list[str] | None:
    out = []
    for b in order:
        f, r = D.has(b, u), D.has(u, b)
        if f and r:
            return None
        out.append("out" if f else "in" if r else "none")
    return out


def _intervals(pat: list[str]) -> tuple[int, int, int] | None:
    """Sizes (|I1|, |I2|, |I3|) when the pattern is out* none* in*."""
    p = 0
    while p < len(pat) and pat[p] == "out":
        p += 1
    q = p
    while q < len(pat) and pat[q] == "none":
        q += 1
    if any(x != "in" for x in pat[q:]):
        return None
    return p, q - p, len(pat) - q


def _leaves_of(G: SolidGraph, b: int, v: int) -> list[int]:
    return sorted(x for x in G.adj[b] if x != v and G.degree(x) == 1)


def analyze_stars(D: Digraph, dec: FesDecomposition, variant: Variant) -> dict[int, StarInfo] | CertifiedNo:
    """Sanity checks on every pendant star and its surrounding/blocking bridge indices."""
    G = dec.G
    for u, c, v in bundled_separated_conflicts(D, variant, G):
        return CertifiedNo(f"bridges {{{u},{c}}} and {{{c},{v}}} are bundled and separated")
    stars: dict[int, StarInfo] = {}
    for v in sorted(dec.core):
        B = sorted(x for x in G.adj[v] if x not in dec.core)
        if not B:
            continue
        try:
            order = star_leaf_tournament(D, v, B)
        except NotCompleteDAG as exc:
            return CertifiedNo(str(exc))
        info = StarInfo(v, order)
        inside = {v} | dec.pendant[v]
        m = len(order)
        for u in range(D.n):
            if u in inside:
                continue
            pat = _pattern(D, u, order)
            iv = _intervals(pat) if pat is not None else None
            if iv is None:
                return CertifiedNo(f"arcs between {u} and the bridge vertices of {v} are not out*/none*/in*")
            if u not in dec.core_adj(v):
                continue
            p, q, _ = iv
            if q <= 1:
                i = p + 1 if q == 1 else max(p, 1)     # 1-based
                idx = [j - 1 for j in range(i - 2, i + 3) if 1 <= j <= m]
                info.surround[u] = idx
                info.marked.update(idx)
            else:
                info.block[u] = (p, p + q - 1)
                info.marked.update((p, p + q - 1))
        if m >= 3:
            for i in range(m - 1):
                if i in info.marked or i + 1 in info.marked:
                    continue
                bi, bj = order[i], order[i + 1]
                outs = [y for y in _leaves_of(G, bj, v) if D.has(v, y)]
                ins = [y for y in _leaves_of(G, bi, v) if D.has(y, v)]
                for x in range(D.n):
                    if x in inside:
                        continue
                    if D.has(x, bi) != D.has(x, bj) or any(D.has(x, y) != D.has(x, bj) for y in outs):
                        return CertifiedNo(f"{x} distinguishes bridge vertices {bi},{bj} of {v}")
                    if D.has(bi, x) != D.has(bj, x) or any(D.has(y, x) != D.has(bi, x) for y in ins):
                        return CertifiedNo(f"{x} is distinguished by bridge vertices {bi},{bj} of {v}")
        stars[v] = info
    return stars


@dataclass
class Removal:
    """One application of the pendant removal rule, kept for rebuilding witnesses."""

    parent: Digraph
    v: int
    keep: list[int]            # child vertex -> parent vertex
    local: list[int]           # window vertices, removed ones included, labeled from the tree solution
    e_s: Edge
    e_t: Edge
    tree_old: list[int]        # D_v vertex -> parent vertex
    tree_witness: Labeling


@dataclass
class ShrinkResult:
    D: Digraph
    removals: list[Removal]


def _removable(info: StarInfo) -> int | None:
    m = len(info.order)
    for i in range(5, m - 5):                  # 0-based i is 1-based i+1 in [6, m-5]
        if all(j not in info.marked for j in range(i - 5, i + 6)):
            return i
    return None


def shrink_pendant_trees(D: Digraph, dec: FesDecomposition, variant: Variant = ANY_STRICT
                         ) -> ShrinkResult | CertifiedNo:
    """Run the sanity checks and drop redundant bridge vertices until none is removable."""
    removals: list[Removal] = []
    while True:
        stars = analyze_stars(D, dec, variant)
        if isinstance(stars, CertifiedNo):
            return stars
        hit = None
        for v, info in sorted(stars.items()):
            i = _removable(info)
            if i is not None:
                hit = (v, info, i)
                break
        if hit is None:
            return ShrinkResult(D, removals)
        v, info, i = hit
        G = dec.G
        tree_vs = sorted({v} | dec.pendant[v])
        Dv, tree_old = D.induced(tree_vs)
        sol = solve_tree(Dv, variant)
        if sol.verdict is Verdict.NO:
            return CertifiedNo(f"pendant tree at {v} is not realizable: {sol.reason}")
        if not sol.yes:
            raise AssertionError("tree solver returned no verdict")
        order = info.order
        kinds = {b.edge: b.kind for b in classified_bridges(D, G)}

        def special(j: int) -> bool:
            return kinds[_ek(v, order[j])] is BridgeKind.SPECIAL

        s = i - 3 if special(i - 3) else i - 4
        t = i + 3 if special(i + 3) else i + 4
        bi = order[i]
        gone = {bi} | set(x for x in G.adj[bi] if x != v)
        local = set()
        for j in range(s + 1, t):
            local.add(order[j])
            local.update(x for x in G.adj[order[j]] if x != v)
        keep = [x for x in range(D.n) if x not in gone]
        sub, _ = D.induced(keep)
        removals.append(Removal(D, v, keep, sorted(local | gone), _ek(v, order[s]), _ek(v, order[t]),
                                tree_old, sol.labeling))
        D = sub
        dec = compute_decomposition(D)
        if isinstance(dec, CertifiedNo):
            return dec


def unshrink(rem: Removal, child: Labeling, variant: Variant) -> Labeling:
    """Witness for the parent instance from a witness of the reduced one."""
    child = frugalize(solid_child(rem), child, variant)
    outer = lift(child, rem.keep)
    inner = lift(rem.tree_witness, rem.tree_old)
    anchors = []
    for e in (rem.e_s, rem.e_t):
        a, b = sorted(inner[e]), sorted(outer[e])
        if len(a) != len(b):
            raise AssertionError(f"frugal label counts on {e} differ between the two solutions")
        anchors.extend(zip(a, b))
    f = MonotoneMap(anchors)
    W = set(rem.local)
    merged = {e: ls for e, ls in outer.items() if not (set(e) & W)}
    for e, ls in inner.items():
        if set(e) & W:
            merged[e] = tuple(f(x) for x in ls)
    lab = compress(merged, rem.parent.n)
    chk = check_realization(rem.parent, lab, variant)
    if not chk:
        raise AssertionError(f"pendant re-insertion failed: {chk.mismatch}")
    return lab


def solid_child(rem: Removal) -> Digraph:
    sub, _ = rem.parent.induced(rem.keep)
    return sub


# ---------------------------------------------------------------- robust and nice connectors

def _orient(D: Digraph, P: Connector) -> Connector:
    """Orient a connector so that a dense or (in,out) direction runs from a to b."""
    p = P.path
    if is_dense_path(D, list(p)):
        return P
    if is_dense_path(D, list(p[::-1])):
        return P.reversed()
    if len(p) >= 3 and D.has(p[0], p[2]) and D.has(p[-3], p[-1]):
        return P
    if len(p) >= 3 and D.has(p[-1], p[-3]) and D.has(p[2], p[0]):
        return P.reversed()
    return P


def is_in_out(D: Digraph, P: Connector) -> bool:
    p = _orient(D, P).path
    return len(p) >= 3 and D.has(p[0], p[2]) and D.has(p[-3], p[-1])


def is_dense_in_out(D: Digraph, P: Connector) -> bool:
    Q = _orient(D, P)
    return is_in_out(D, Q) and is_dense_path(D, list(Q.path))


def is_robust(D: Digraph, P: Connector, budget: int = 200_000) -> bool:
    forbidden = P.interior
    return not (dense_path_exists(D, P.a, P.b, forbidden, budget=budget)
                or dense_path_exists(D, P.b, P.a, forbidden, budget=budget))


def is_nice(D: Digraph, P: Connector, budget: int = 200_000) -> bool:
    if P.trivial or not is_robust(D, P, budget):
        return False
    Q = _orient(D, P)
    a, b = Q.a, Q.b
    if all(not (D.has(q, a) and D.has(q, b)) and not (D.has(a, q) and D.has(b, q)) for q in Q.path):
        return True
    if not is_dense_in_out(D, Q):
        return False
    outside = set(range(D.n)) - set(Q.tree)
    forbidden = Q.interior
    for v in sorted(outside):
        if D.has(v, a) and D.has(v, b) and dense_path_exists(D, v, b, forbidden | {a}, budget=budget):
            return False
        if D.has(a, v) and D.has(b, v) and dense_path_exists(D, a, v, forbidden | {b}, budget=budget):
            return False
    return True


def robust_split_vertices(D: Digraph, P: Connector) -> set[int]:
    """U_P of at most six path vertices after which every sub-connector is trivial or robust."""
    Q = _orient(D, P)
    p = Q.path
    base = {p[1], p[2], p[-2], p[-3]}
    if not (D.has(p[0], p[2]) and D.has(p[-3], p[-1])):
        return base
    a = p[0]
    for j in range(2, len(p) - 1):             # 0-based positions 2 .. l-2
        if D.has(p[j], a):
            return base | {p[j - 1], p[j]}
    return base


def _dense_case_vertices(p: tuple[int, ...]) -> set[int]:
    return {p[1], p[2], p[-2], p[-3]}


def nice_split_vertices(D: Digraph, P: Connector) -> set[int]:
    """U_P of at most ten path vertices after which every sub-connector is trivial or nice."""
    Q = _orient(D, P)
    p = Q.path
    if is_dense_in_out(D, Q):
        return _dense_case_vertices(p)
    a, b = p[0], p[-1]
    for k, q in enumerate(p):
        if (D.has(a, q) and D.has(b, q)) or (D.has(q, a) and D.has(q, b)):
            break
    else:
        return set()
    out = {p[k], p[k - 1]}
    for sub in (p[:k], p[k:]):
        if len(sub) - 1 > 3:
            out |= _dense_case_vertices(sub)
    return out


def compute_Wstar(D: Digraph, dec: FesDecomposition, variant: Variant = ANY_STRICT
                  ) -> frozenset[int] | CertifiedNo:
    """W* with X* <= W* <= V* such that every W*-connector is nice; sets dec.w_connectors."""
    W1 = set(dec.Xstar)
    for P in dec.connectors:
        if not P.trivial:
            W1 |= robust_split_vertices(D, P)
    W2 = set(W1)
    for P in connectors_for(dec, frozenset(W1)):
        if P.trivial:
            continue
        sub, _ = D.induced(sorted(P.tree))
        res = solve_tree(sub, variant)
        if res.verdict is Verdict.NO:
            return CertifiedNo(f"extension of connector {P.path} is not realizable: {res.reason}")
        W2 |= nice_split_vertices(D, P)
    W = set(W2)
    for P in connectors_for(dec, frozenset(W2)):
        if P.trivial:
            W.update(P.path)
    dec.Wstar = frozenset(W)
    dec.w_connectors = []
    for P in connectors_for(dec, dec.Wstar):
        Q = _orient(D, P)
        Q.robust = Q.nice = True               # by construction
        dec.w_connectors.append(Q)
    nconn = len(dec.connectors)
    if len(dec.Wstar) > len(dec.Xstar) + 16 * max(nconn, 1):
        raise AssertionError("W* exceeds its size bound")
    return dec.Wstar


# ---------------------------------------------------------------- entrance edges and L_P

def entrance_edge(D: Digraph, P: Connector, v_in: int, v_out: int,
                  outward: bool | None = None) -> Edge | CertifiedNo:
    """The boundary edge every dense path realizing the arc between v_in and v_out uses.

    outward selects the arc (v_in, v_out) over (v_out, v_in); by default whichever exists,
    preferring the former.
    """
    if v_in not in P.interior or v_out in P.interior:
        raise ValueError("v_in must be internal to the connector tree and v_out external")
    Q = _orient(D, P)
    return _entrance(D, Q, is_dense_in_out(D, Q), v_in, v_out, outward)


def _entrance(D: Digraph, Q: Connector, dense: bool, v_in: int, v_out: int,
              outward: bool | None) -> Edge | CertifiedNo:
    if outward is None:
        outward = D.has(v_in, v_out)
    if not (D.has(v_in, v_out) if outward else D.has(v_out, v_in)):
        raise ValueError(f"no arc between {v_in} and {v_out} in that direction")
    ends = {Q.a: Q.boundary[0], Q.b: Q.boundary[1]}
    if v_out in ends:
        return ends[v_out]
    if not dense:
        hits = [c for c in (Q.a, Q.b) if (D.has(v_in, c) if outward else D.has(c, v_in))]
        if len(hits) != 1:
            return CertifiedNo(f"arc between {v_in} and {v_out} has {len(hits)} possible entrances")
        return ends[hits[0]]
    hits = [c for c in (Q.a, Q.b) if (D.has(c, v_out) if outward else D.has(v_out, c))]
    if not hits:
        return CertifiedNo(f"arc between {v_in} and {v_out} cannot pass the connector ends")
    if len(hits) == 2:
        return ends[Q.b] if outward else ends[Q.a]
    return ends[hits[0]]


@dataclass
class ConnectorLabelSet:
    connector: Connector
    pins: dict[Edge, tuple[int, ...]]
    labelings: list[dict[Edge, tuple[int, ...]]]
    types: list[tuple] = field(default_factory=list)


def _reach_sets(D: Digraph, Q: Connector) -> dict | CertifiedNo:
    """V^<, V^<=, V^>=, V^> for both ends, with the consistency checks."""
    inner = sorted(Q.interior)
    ext = [x for x in range(D.n) if x not in Q.interior]
    dense = is_dense_in_out(D, Q)
    out: dict = {}
    for c, c1 in ((Q.a, Q.a1), (Q.b, Q.b1)):
        e_c = _ek(c, c1)
        lt = frozenset(x for x in inner if D.has(x, c))
        gt = frozenset(x for x in inner if D.has(c, x))
        ins: set[frozenset[int]] = set()
        outs: set[frozenset[int]] = set()
        for w in ext:
            m_in, m_out = set(), set()
            for x in inner:
                if D.has(x, w):
                    e = _entrance(D, Q, dense, x, w, True)
                    if isinstance(e, CertifiedNo):
                        return e
                    if e == e_c:
                        m_in.add(x)
                if D.has(w, x):
                    e = _entrance(D, Q, dense, x, w, False)
                    if isinstance(e, CertifiedNo):
                        return e
                    if e == e_c:
                        m_out.add(x)
            if m_in:
                ins.add(frozenset(m_in))
            if m_out:
                outs.add(frozenset(m_out))
        le = min(ins, key=lambda s: (len(s), sorted(s))) if ins else lt
        ge = min(outs, key=lambda s: (len(s), sorted(s))) if outs else gt
        if not (le <= lt and ge <= gt and c1 in le and c1 in ge and lt & gt == {c1}):
            return CertifiedNo(f"reach classes through {e_c} are inconsistent")
        if any(s not in (lt, le) for s in ins) or any(s not in (gt, ge) for s in outs):
            return CertifiedNo(f"more than two reach classes pass through {e_c}")
        out[c] = {"c1": c1, "<": lt, "<=": le, ">=": ge, ">": gt}
    return out


_J = ("va<=", "va>=", "vb<=", "vb>=")
_AJ = (("va<=", "b"), ("a", "vb>="), ("va<=", "vb>="))


def _aux_instance(D: Digraph, Q: Connector, sets: dict, Qset: frozenset[str], AQ: frozenset[tuple[str, str]]):
    """D_Gamma for the consistent type (Qset, AQ); returns the digraph and its vertex names."""
    tree = sorted(Q.tree)
    names: dict = {x: i for i, x in enumerate(tree)}
    extra = list(Qset)
    for c in "ab":
        if f"v{c}>=" in Qset:
            extra.append(f"f{c}<=")
        if f"v{c}<=" in Qset:
            extra.append(f"f{c}>=")
    for x in sorted(set(extra)):
        names[x] = len(names)
    arcs: set[Edge] = set()

    def add(x, y):
        if x in names and y in names and x != y:
            arcs.add((names[x], names[y]))

    a, b = Q.a, Q.b
    for x, y in D.arcs:
        if x in Q.tree and y in Q.tree:
            if {x, y} == {a, b} and D.has(y, x):
                continue                        # the solid edge {a,b} lies outside C
            add(x, y)
    ends = {"a": a, "b": b}
    if D.has(a, b) and not D.has(b, a):
        add("fa<=", b)
        add(a, "fb>=")
        add("fa<=", "fb>=")
    for c in "ab":
        cv, c1 = ends[c], sets[ends[c]]["c1"]
        for s in ("<=", ">="):
            add(f"v{c}{s}", cv)
            add(cv, f"v{c}{s}")
            add(f"f{c}{s}", c1)
            add(c1, f"f{c}{s}")
        add(f"f{c}<=", f"f{c}>=")
        add(f"v{c}<=", f"v{c}>=")
        add(c1, f"v{c}>=")
        add(cv, f"f{c}>=")
        add(f"v{c}<=", c1)
        add(f"f{c}<=", cv)
    if ("va<=", "b") in AQ:
        for x in ("va<=", "fa>="):
            for y in (b, "fb>="):
                add(x, y)
    if ("a", "vb>=") in AQ:
        for x in (a, "fa<="):
            for y in ("vb>=", "fb<="):
                add(x, y)
    if ("va<=", "vb>=") in AQ:
        for x in ("va<=", "fa>="):
            for y in ("vb>=", "fb<="):
                add(x, y)
    for c in "ab":
        S = sets[ends[c]]
        for x in S["<"]:
            add(x, f"f{c}>=")
        for x in S[">"]:
            add(f"f{c}<=", x)
        for x in S["<="]:
            add(x, f"f{c}<=")
            add(x, f"f{c}>=")
            add(x, f"v{c}>=")
        for x in S[">="]:
            add(f"f{c}<=", x)
            add(f"f{c}>=", x)
            add(f"v{c}<=", x)
    return Digraph(len(names), frozenset(arcs)), names


def consistent_types():
    for r in range(len(_J) + 1):
        for mask in range(1 << len(_J)):
            Qset = frozenset(j for i, j in enumerate(_J) if mask >> i & 1)
            if len(Qset) != r:
                continue
            avail = Qset | {"a", "b"}
            opts = [x for x in _AJ if x[0] in avail and x[1] in avail]
            for amask in range(1 << len(opts)):
                yield Qset, frozenset(x for i, x in enumerate(opts) if amask >> i & 1)


def connector_label_sets(D: Digraph, P: Connector, pins_a: tuple[int, ...], pins_b: tuple[int, ...],
                         variant: Variant = ANY_STRICT) -> ConnectorLabelSet | CertifiedNo:
    """Candidate labelings of the extension of P that agree with the boundary pins."""
    Q = _orient(D, P)
    if P.path != Q.path:
        pins_a, pins_b = pins_b, pins_a
    pins_a, pins_b = tuple(sorted(set(pins_a))), tuple(sorted(set(pins_b)))
    if not (1 <= len(pins_a) <= 2 and 1 <= len(pins_b) <= 2):
        raise ValueError("each boundary edge takes one or two pinned labels")
    ea, eb = Q.boundary
    sets = _reach_sets(D, Q)
    if isinstance(sets, CertifiedNo):
        return sets
    result = ConnectorLabelSet(Q, {ea: pins_a, eb: pins_b}, [])
    seen = set()
    G = solid_graph(D)
    cedges = Q.edges(G)
    for Qset, AQ in consistent_types():
        aux, names = _aux_instance(D, Q, sets, Qset, AQ)
        pins = {_ek(names[ea[0]], names[ea[1]]): pins_a, _ek(names[eb[0]], names[eb[1]]): pins_b}
        if not is_tree(solid_graph(aux)):
            continue
        try:
            res = solve_tree(aux, variant, prelabels=pins)
        except ValueError:
            continue                            # pins disagree with the edge kinds of this type
        if not res.yes:
            continue
        lab = {}
        for x, y in cedges:
            lab[(x, y)] = res.labeling.get(names[x], names[y])
        key = tuple(sorted(lab.items()))
        if key in seen:
            continue
        seen.add(key)
        result.labelings.append(lab)
        result.types.append((tuple(sorted(Qset)), tuple(sorted(AQ))))
    return result


# ---------------------------------------------------------------- enumeration

def edge_cap(dec: FesDecomposition) -> int:
    """Per-edge label bound traced from the counting argument for O(fes) labels."""
    return (len(dec.Xstar) + 4 * len(dec.connectors)
            + 2 * sum(dec.core_degree(x) for x in dec.Xstar))


def estar_edges(dec: FesDecomposition, W: frozenset[int]) -> list[Edge]:
    inside = set(W)
    for w in W:
        inside |= dec.pendant.get(w, frozenset())
    return sorted(e for e in dec.G.edges if e[0] in W or e[1] in W
                  or (e[0] in inside and e[1] in inside))


@dataclass
class _Search:
    D: Digraph
    variant: Variant
    edges: list[Edge]
    caps: list[int]
    connectors: list[Connector]
    boundary: dict[int, int]                  # edge index -> W*-side endpoint
    grid: int
    spacing: int
    node_budget: int
    nodes: int = 0
    evaluated: int = 0
    cache: dict = field(default_factory=dict)


def _completable(D: Digraph, adj: list[int], R: tuple[int, ...], target: tuple[int, ...],
                 skip: int = 0, bypass: dict[int, int] | None = None,
                 extra: Callable[[int], int] | None = None) -> bool:
    """Necessary condition for extending R to target by later labels.

    A later label on {p,q} hands q to every source that has reached p, so q must be in all
    their targets, and symmetrically for p. skip masks vertices whose pairs are not tracked; bypass adds pseudo-edges
    that connector trees may realize freely; extra(x) is reach x may already own through
    connectors.
    """
    n = D.n
    M = []
    for p in range(n):
        m = -1
        for w in range(n):
            if R[w] >> p & 1 and not skip >> w & 1:
                m &= target[w]
        M.append(m)
    # labels are undirected: {p,q} also hands p to the sources at q
    allowed = [sum(1 << q for q in bits(adj[p] & M[p]) if M[q] >> p & 1) for p in range(n)]
    for x in range(n):
        if skip >> x & 1 or R[x] == target[x]:
            continue
        tx = target[x] & ~skip
        seen = extra(x) if extra else R[x]
        frontier = seen
        while frontier:
            nxt = 0
            for p in bits(frontier):
                nxt |= allowed[p]
                if bypass and p in bypass:
                    nxt |= bypass[p]
            nxt &= tx & ~seen
            seen |= nxt
            frontier = nxt
        if tx & ~seen:
            return False
    return True


class _NoTarget:
    """Target for virtual tokens: they never overshoot."""

    def __getitem__(self, i: int) -> int:
        return -1


def _search(s: _Search) -> Labeling | None:
    D, variant = s.D, s.variant
    st = _Setup(D, variant, s.edges, tuple(D.out_mask[x] | 1 << x for x in range(D.n)),
                tuple(1 << x for x in range(D.n)))
    virt_st = _Setup(D, variant, s.edges, _NoTarget(), ())
    seq: list[list[int]] = []
    dead: dict = {}
    has_conn = bool(s.connectors)
    capped = [i for i, c in enumerate(s.caps) if c < s.grid]
    adj = [0] * D.n
    for u, v in s.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    skip = 0
    bypass: dict[int, int] = {}
    for P in s.connectors:
        for x in P.interior:
            skip |= 1 << x
        bypass[P.a] = bypass.get(P.a, 0) | 1 << P.b
        bypass[P.b] = bypass.get(P.b, 0) | 1 << P.a
    index = {e: i for i, e in enumerate(s.edges)}
    ends = {index[e]: 1 << P.a | 1 << P.b for P in s.connectors for e in P.boundary}

    def advance(R, V, idxs):
        R2 = _step(st, R, idxs)
        if R2 is None:
            return None
        new = [s.boundary[i] for i in idxs if i in s.boundary]
        if not variant.strict:
            V = V + tuple(1 << c for c in new)
        V2 = _step(virt_st, V, idxs) if V else ()
        if variant.strict:
            V2 = V2 + tuple(1 << c for c in new)
        return R2, V2

    def candidates(R, V, counts):
        allowed = [i for i in range(len(s.edges)) if counts[i] < s.caps[i]]
        pool = []
        for i in allowed:
            nxt = advance(R, V, [i])
            if nxt is None:
                continue
            useful = nxt[0] != R or nxt[1][:len(V)] != V or i in s.boundary
            if useful or not variant.strict:
                pool.append(i)
        k = len(pool)
        if k > 20:
            raise _OutOfNodes
        # larger snapshots first: realizations tend to be found early
        for mask in range((1 << k) - 1, 0, -1):
            idxs = [pool[j] for j in range(k) if mask >> j & 1]
            if not _class_ok(st, idxs):
                continue
            nxt = advance(R, V, idxs)
            if nxt is None:
                continue
            R2, V2 = nxt
            if R2 == R and V2[:len(V)] == V and not any(i in s.boundary for i in idxs):
                continue
            yield idxs, R2, V2

    def arrivals(R, V, idxs):
        """Real and virtual sources that have reached each newly used boundary endpoint."""
        out = []
        for i in idxs:
            if i in s.boundary:
                c = s.boundary[i]
                out.append((i, sum(1 << x for x in range(D.n) if R[x] >> c & 1),
                            sum(1 << k for k in range(len(V)) if V[k] >> c & 1)))
        return tuple(out)

    def owned(R, V, arr):
        """x's E* reach plus every token of a connector whose ends x may reach."""
        def f(x: int) -> int:
            m = R[x]
            grew = True
            while grew:
                grew = False
                for k, (i, _, _) in enumerate(arr):
                    if m & ends[i] and V[k] & ~m:
                        m |= V[k]
                        grew = True
            return m
        return f

    def dfs(R, V, arr, counts, remaining) -> Labeling | None:
        own = owned(R, V, arr)
        s.nodes += 1
        if s.nodes > s.node_budget:
            raise _OutOfNodes
        if not has_conn:
            if R == st.target:
                return _grid_labeling(s, seq)
        elif all(st.target[x] & ~skip & ~own(x) == 0 for x in range(D.n) if not skip >> x & 1):
            # connectors only add pairs whose head some virtual token already reaches
            lab = _evaluate(s, seq, counts)
            if lab is not None:
                return lab
        if remaining == 0 or not _completable(D, adj, R, st.target, skip, bypass, own):
            return None
        # the summary (R, V, arrivals) fixes how every future extension behaves; only the
        # capped edges' counts matter beyond it
        key = (R, V, arr, tuple(counts[i] for i in capped))
        if dead.get(key, -1) >= remaining:
            return None
        for idxs, R2, V2 in candidates(R, V, counts):
            c2 = list(counts)
            for i in idxs:
                c2[i] += 1
            seq.append(idxs)
            arr2 = arr + arrivals(R, V, idxs) if has_conn else arr
            found = dfs(R2, V2, arr2, tuple(c2), remaining - 1)
            if found is not None:
                return found
            seq.pop()
        dead[key] = max(dead.get(key, -1), remaining)
        return None

    return dfs(st.start, (), (), (0,) * len(s.edges), s.grid)


def _grid_labeling(s: _Search, seq: list[list[int]]) -> Labeling:
    lab = Labeling(s.D.n)
    for t, idxs in enumerate(seq, start=1):
        for i in idxs:
            lab.set(*s.edges[i], lab.get(*s.edges[i]) + (t * s.spacing,))
    return lab


def _evaluate(s: _Search, seq: list[list[int]], counts: tuple[int, ...]) -> Labeling | None:
    """Try every combination of connector labelings on top of the current E* labeling."""
    index = {e: i for i, e in enumerate(s.edges)}
    for P in s.connectors:
        for e in P.boundary:
            if not 1 <= counts[index[e]] <= 2:
                return None
    base = _grid_labeling(s, seq)
    options = []
    for ci, P in enumerate(s.connectors):
        ea, eb = P.boundary
        pa, pb = base.get(*ea), base.get(*eb)
        # L_P depends on the pins only through their relative order
        vals = sorted(set(pa) | set(pb))
        canon = {v: (r + 1) * s.spacing for r, v in enumerate(vals)}
        key = (ci, tuple(canon[v] for v in pa), tuple(canon[v] for v in pb))
        if key not in s.cache:
            r = connector_label_sets(s.D, P, key[1], key[2], s.variant)
            s.cache[key] = [] if isinstance(r, CertifiedNo) else r.labelings
        if not s.cache[key]:
            return None
        f = MonotoneMap((c, v) for v, c in canon.items())
        options.append([{e: tuple(int(f(t)) for t in ls) for e, ls in lab.items()}
                        for lab in s.cache[key]])
    for combo in product(*options):
        lab = base.copy()
        for part in combo:
            for e, ls in part.items():
                lab.set(*e, ls)
        s.evaluated += 1
        if check_realization(s.D, lab, s.variant):
            return lab
    return None


def solve_core(D: Digraph, variant: Variant = ANY_STRICT, grid_cap: int = DEFAULT_GRID_CAP,
               node_budget: int = DEFAULT_NODE_BUDGET, absorb_connectors: bool = False,
               stats: dict | None = None) -> RealizeResult:
    """Decide a connected instance with cycles whose pendant trees are normalized."""
    stats = {} if stats is None else stats
    dec = compute_decomposition(D)
    if isinstance(dec, CertifiedNo):
        return RealizeResult.no("fes", dec.reason)
    shr = shrink_pendant_trees(D, dec, variant)
    if isinstance(shr, CertifiedNo):
        return RealizeResult.no("fes", shr.reason)
    Dr = shr.D
    dec = compute_decomposition(Dr)
    if isinstance(dec, CertifiedNo):
        return RealizeResult.no("fes", dec.reason)
    W = compute_Wstar(Dr, dec, variant)
    if isinstance(W, CertifiedNo):
        return RealizeResult.no("fes", W.reason)
    connectors = list(dec.w_connectors)
    if absorb_connectors and connectors:
        W = dec.core
        connectors = []
    edges = estar_edges(dec, W)
    cap = edge_cap(dec)
    grid = len(edges) * max(cap, 1)
    bset = {e for P in connectors for e in P.boundary}
    caps = [1 if variant.simple else 2 if e in bset else grid for e in edges]
    stats.update({"fes": dec.fes, "Xstar": len(dec.Xstar), "Wstar": len(W), "Estar": len(edges),
                  "connectors": len(connectors), "cap_per_edge": cap, "grid": grid,
                  "removed_pendants": len(shr.removals)})
    if grid > grid_cap:
        raise GridBudgetExceeded(f"label grid of {grid} exceeds the cap of {grid_cap}")
    index = {e: i for i, e in enumerate(edges)}
    boundary = {}
    for P in connectors:
        boundary[index[P.boundary[0]]] = P.a
        boundary[index[P.boundary[1]]] = P.b
    spacing = 2 * Dr.n + 16
    search = _Search(Dr, variant, edges, caps, connectors, boundary, grid, spacing, node_budget)
    try:
        lab = _search(search)
    finally:
        stats.update({"nodes": search.nodes, "combinations": search.evaluated})
    if lab is None:
        return RealizeResult.no("fes", "no labeling of E* extends to a realization")
    chk = check_realization(Dr, lab, variant)
    if not chk:
        raise AssertionError(f"fes witness failed: {chk.mismatch}")
    for rem in reversed(shr.removals):
        lab = unshrink(rem, lab, variant)
    return RealizeResult(Verdict.YES, compress(lab.entries, D.n), "fes")


def fes_solve(D: Digraph, variant: Variant = ANY_STRICT, grid_cap: int = DEFAULT_GRID_CAP,
              node_budget: int = DEFAULT_NODE_BUDGET, absorb_connectors: bool = False) -> RealizeResult:
    """Decide an undirected instance; YES witnesses are certified against D."""
    if variant.directed:
        raise ValueError("the feedback-edge-set solver handles undirected variants only")
    t0 = time.perf_counter()
    stats: dict = {}
    if not variant.is_any_strict:
        for b in classified_bridges(D):
            if b.special:
                return RealizeResult.no("fes", f"special bridge {b.edge} under {variant}")

    def leaf(piece: Digraph) -> RealizeResult:
        if is_forest(solid_graph(piece)):
            return solve_tree(piece, variant)
        node = normalize_pendants(piece, variant)
        if isinstance(node, CertifiedNo):
            return RealizeResult.no("fes", node.reason)

        def core_leaf(p: Digraph) -> RealizeResult:
            if is_forest(solid_graph(p)):
                return solve_tree(p, variant)
            return solve_core(p, variant, grid_cap, node_budget, absorb_connectors, stats)

        return recompose(node, core_leaf, variant)

    root = exhaust_splits(D, variant)
    if isinstance(root, CertifiedNo):
        return RealizeResult.no("fes", root.reason, seconds=time.perf_counter() - t0)
    try:
        res = recompose(root, leaf, variant)
    except GridBudgetExceeded as exc:
        res = RealizeResult(Verdict.UNKNOWN, None, "fes", str(exc))
    except _OutOfNodes:
        res = RealizeResult(Verdict.UNKNOWN, None, "fes", "node budget exhausted")
    res.stats.update(stats)
    res.stats["seconds"] = time.perf_counter() - t0
    if res.yes:
        chk = check_realization(D, res.labeling, variant)
        if not chk:
            raise AssertionError(f"fes witness failed: {chk.mismatch}")
        res.method = "fes" if "fes" in res.method else f"fes({res.method})"
    return res
