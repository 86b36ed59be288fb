"""Structure derived from D: solid graph, bridges, special edges, bundled/separated pairs."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .core import Digraph, Edge, Variant


@dataclass(frozen=True)
class SolidGraph:
    n: int
    edges: frozenset[Edge]
    adj: tuple[frozenset[int], ...] = field(repr=False)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def solid_graph(D: Digraph) -> SolidGraph:
    edges = frozenset((u, v) for u, v in D.arcs if u < v and D.has(v, u))
    adj: list[set[int]] = [set() for _ in range(D.n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return SolidGraph(D.n, edges, tuple(frozenset(a) for a in adj))


def dashed_arcs(D: Digraph) -> frozenset[Edge]:
    return frozenset((u, v) for u, v in D.arcs if not D.has(v, u))


def components(G: SolidGraph, removed: Iterable[int] = ()) -> list[list[int]]:
    gone = set(removed)
    seen = set(gone)
    out = []
    for s in range(G.n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in G.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def side_of(G: SolidGraph, u: int, v: int) -> frozenset[int]:
    """Vertices reachable from u in G without using edge {u,v}."""
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in G.adj[x]:
            if (x == u and y == v) or (x == v and y == u) or y in seen:
                continue
            seen.add(y)
            stack.append(y)
    return frozenset(seen)


def is_forest(G: SolidGraph) -> bool:
    return len(G.edges) == G.n - len(components(G))


def is_tree(G: SolidGraph) -> bool:
    return len(G.edges) == G.n - 1 and len(components(G)) == 1


def tree_path(G: SolidGraph, u: int, v: int) -> list[int]:
    """Vertex sequence of the unique u-v path in a forest (empty if disconnected)."""
    parent = {u: -1}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for y in G.adj[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    if v not in parent:
        return []
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def has_triangle(G: SolidGraph) -> bool:
    for u, v in G.edges:
        if G.adj[u] & G.adj[v]:
            return True
    return False


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class BridgeKind(enum.Enum):
    SPECIAL = "special"
    NONSPECIAL = "non-special"


@dataclass(frozen=True)
class BridgeInfo:
    u: int
    v: int
    side_u: frozenset[int]
    side_v: frozenset[int]
    kind: BridgeKind | None = None

    @property
    def edge(self) -> Edge:
        return (min(self.u, self.v), max(self.u, self.v))

    @property
    def special(self) -> bool:
        return self.kind is BridgeKind.SPECIAL

    def oriented(self, u: int) -> "BridgeInfo":
        """Same bridge with u as the first endpoint."""
        if u == self.u:
            return self
        return BridgeInfo(self.v, self.u, self.side_v, self.side_u, self.kind)


def bridges(G: SolidGraph) -> list[BridgeInfo]:
    out = []
    for a, b in nx.bridges(G.to_networkx()):
        u, v = min(a, b), max(a, b)
        su = side_of(G, u, v)
        out.append(BridgeInfo(u, v, su, frozenset(range(G.n)) - su))
    out.sort(key=lambda b: b.edge)
    return out


def _witness(D: Digraph, u: int, v: int, side_u: frozenset[int], side_v: frozenset[int]):
    """A pair (a, b), a on u's side and b on v's side, with D_av = D_ub = 1 and D_ab = 0."""
    vmask = mask_of(side_v)
    reach_u = D.out_mask[u] & vmask
    for a in sorted(side_u):
        if a != u and D.has(a, v):
            missing = reach_u & ~D.out_mask[a]
            if missing:
                return a, bits(missing)[0]
    return None


def classify_bridge(D: Digraph, b: BridgeInfo) -> BridgeKind:
    if _witness(D, b.u, b.v, b.side_u, b.side_v) or _witness(D, b.v, b.u, b.side_v, b.side_u):
        return BridgeKind.SPECIAL
    return BridgeKind.NONSPECIAL


def classified_bridges(D: Digraph, G: SolidGraph | None = None) -> list[BridgeInfo]:
    G = G or solid_graph(D)
    out = []
    for b in bridges(G):
        out.append(BridgeInfo(b.u, b.v, b.side_u, b.side_v, classify_bridge(D, b)))
    return out


def spanning_violation(D: Digraph, b: BridgeInfo) -> str | None:
    """An arc across the bridge whose route through it is not dense, if any.

    Every temporal path from a in G_u to x in G_v crosses {u,v}, so a must reach both u
    and v, and both u and v must reach x.
    """
    for near, far, side_near, side_far in ((b.u, b.v, b.side_u, b.side_v), (b.v, b.u, b.side_v, b.side_u)):
        far_mask = mask_of(side_far)
        for a in sorted(side_near):
            for x in bits(D.out_mask[a] & far_mask):
                if a != near and not D.has(a, near):
                    return f"arc ({a},{x}) crosses {{{near},{far}}} but ({a},{near}) is missing"
                if x != far and not D.has(far, x):
                    return f"arc ({a},{x}) crosses {{{near},{far}}} but ({far},{x}) is missing"
                if x != far and not D.has(a, far):
                    return f"arc ({a},{x}) crosses {{{near},{far}}} but ({a},{far}) is missing"
                if a != near and not D.has(near, x):
                    return f"arc ({a},{x}) crosses {{{near},{far}}} but ({near},{x}) is missing"
    return None


def reach_across(D: Digraph, w: int, far_side: frozenset[int]) -> frozenset[int]:
    """R_{u->v}(w): the vertices of the far side that w reaches."""
    return frozenset(bits(D.out_mask[w] & mask_of(far_side)))


@dataclass
class PlausibleInfo:
    ok: bool
    reason: str = ""
    # per direction: witness pair (a,b) from the first side into the second, or None
    witness_uv: tuple[int, int] | None = None
    witness_vu: tuple[int, int] | None = None
    classes_u: dict[int, frozenset[int]] = field(default_factory=dict)
    classes_v: dict[int, frozenset[int]] = field(default_factory=dict)


def _plausible_one_side(D, u, v, side_u, side_v):
    R = {w: reach_across(D, w, side_v) for w in side_u}
    wit = _witness(D, u, v, side_u, side_v)
    full = R[u]
    if wit is not None:
        mid = R[wit[0]]
        if not (frozenset() < mid < full):
            return False, wit, R, f"middle class of {wit[0]} not strictly between"
        allowed = (frozenset(), mid, full)
    else:
        allowed = (frozenset(), full)
    for w in sorted(side_u):
        if R[w] not in allowed:
            return False, wit, R, f"vertex {w} reaches {sorted(R[w])} across {{{u},{v}}}"
    return True, wit, R, ""


def plausible_reachability(D: Digraph, b: BridgeInfo) -> PlausibleInfo:
    ok1, w1, R1, why1 = _plausible_one_side(D, b.u, b.v, b.side_u, b.side_v)
    ok2, w2, R2, why2 = _plausible_one_side(D, b.v, b.u, b.side_v, b.side_u)
    return PlausibleInfo(ok1 and ok2, why1 or why2, w1, w2, R1, R2)


def _bridge_between(G: SolidGraph, bridge_set: set[Edge], x: int, y: int) -> bool:
    return (min(x, y), max(x, y)) in bridge_set


def is_special_in(D: Digraph, u: int, v: int) -> bool:
    """Whether {u,v} is a special bridge of D (False when it is not a bridge)."""
    G = solid_graph(D)
    if not G.has_edge(u, v):
        return False
    su = side_of(G, u, v)
    if v in su:
        return False
    b = BridgeInfo(u, v, su, frozenset(range(D.n)) - su)
    return classify_bridge(D, b) is BridgeKind.SPECIAL


def bundled(D: Digraph, c: int, u: int, v: int, G: SolidGraph | None = None) -> bool:
    G = G or solid_graph(D)
    if not (D.has(u, v) or D.has(v, u)):
        return True
    Vu = side_of(G, u, c)
    Vv = side_of(G, v, c)
    sub, old = D.induced(sorted(Vu | Vv | {c}))
    pos = {x: i for i, x in enumerate(old)}
    return is_special_in(sub, pos[u], pos[c]) or is_special_in(sub, pos[v], pos[c])


def separated(D: Digraph, c: int, u: int, v: int, variant: Variant,
              G: SolidGraph | None = None, kinds: dict[Edge, BridgeKind] | None = None) -> bool:
    if variant.proper or not variant.strict:
        return True
    G = G or solid_graph(D)
    if kinds is None:
        kinds = {b.edge: b.kind for b in classified_bridges(D, G)}

    def special(x: int, y: int) -> bool:
        return kinds.get((min(x, y), max(x, y))) is BridgeKind.SPECIAL

    arc = D.has(u, v) or D.has(v, u)
    if variant.simple and arc:
        return True
    if arc and not special(u, c) and not special(v, c):
        return True
    nbrs = [w for w in sorted(G.adj[c]) if w not in (u, v) and (min(w, c), max(w, c)) in kinds]
    for s, t in ((u, v), (v, u)):
        for w1 in nbrs:
            if not D.has(s, w1):
                continue
            for w2 in nbrs:
                if w2 != w1 and D.has(w1, w2) and D.has(w2, t):
                    return True
        for w in nbrs:
            if D.has(s, w) and D.has(w, t):
                if not special(s, c) or special(w, c) or not special(t, c):
                    return True
    return False


def bundled_separated_conflicts(D: Digraph, variant: Variant,
                                G: SolidGraph | None = None) -> list[tuple[int, int, int]]:
    """Adjacent bridges {u,c},{c,v} that are both bundled and separated; any one means NO."""
    G = G or solid_graph(D)
    kinds = {b.edge: b.kind for b in classified_bridges(D, G)}
    out = []
    for c in range(D.n):
        nb = [w for w in sorted(G.adj[c]) if (min(w, c), max(w, c)) in kinds]
        for i, u in enumerate(nb):
            for v in nb[i + 1:]:
                if bundled(D, c, u, v, G) and separated(D, c, u, v, variant, G, kinds):
                    out.append((u, c, v))
    return out


class BudgetExceeded(RuntimeError):
    pass


def dense_path_exists(D: Digraph, u: int, v: int, forbidden: Iterable[int] = (),
                      G: SolidGraph | None = None, budget: int = 200_000) -> bool:
    """Is there a path u..v in G (avoiding forbidden) whose forward pairs are all arcs of D?"""
    G = G or solid_graph(D)
    banned = set(forbidden)
    if u in banned or v in banned:
        return False
    nodes = 0
    # need: mask of vertices with an arc from every vertex on the current path
    stack = [(u, 1 << u, D.out_mask[u])]
    while stack:
        x, on_path, need = stack.pop()
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"dense path search exceeded {budget} nodes")
        for y in G.adj[x]:
            if y in banned or on_path >> y & 1 or not need >> y & 1:
                continue
            if y == v:
                return True
            stack.append((y, on_path | 1 << y, need & D.out_mask[y]))
    return False


def is_dense_path(D: Digraph, path: list[int]) -> bool:
    return all(D.has(path[i], path[j]) for i in range(len(path)) for j in range(i + 1, len(path)))


class NotCompleteDAG(ValueError):
    pass


def star_leaf_tournament(D: Digraph, center: int, leaves: Iterable[int]) -> list[int]:
    """Topological order of the leaves if D restricted to them is an acyclic tournament."""
    leaves = list(leaves)
    for i, x in enumerate(leaves):
        for y in leaves[i + 1:]:
            if D.has(x, y) == D.has(y, x):
                raise NotCompleteDAG(f"leaves {x},{y} of star at {center} lack exactly one arc")
    indeg = {x: sum(D.has(y, x) for y in leaves if y != x) for x in leaves}
    order = sorted(leaves, key=lambda x: indeg[x])
    if sorted(indeg.values()) != list(range(len(leaves))):
        raise NotCompleteDAG(f"leaf tournament at {center} has a cycle")
    return order


@dataclass
class DirectedFacts:
    must_label: set[Edge] = field(default_factory=set)
    unlabeled_cycles: list[list[int]] = field(default_factory=list)
    certified_no: bool = False
    reason: str = ""


def triangulated(D: Digraph, u: int, v: int) -> bool:
    return bool(D.out_mask[u] & D.in_mask[v])


def induced_cycles(D: Digraph, max_len: int = 6) -> list[list[int]]:
    """Induced directed cycles of length 3..max_len, each listed once from its minimum vertex."""
    out = []

    def extend(path: list[int], mask: int) -> None:
        x = path[-1]
        for y in D.out_neighbors(x):
            if y == path[0] and len(path) >= 3:
                out.append(list(path))
                continue
            if y <= path[0] or mask >> y & 1 or len(path) >= max_len:
                continue
            # y may only touch path[-1] (incoming) and, to close, path[0] (outgoing)
            inner = mask & ~(1 << x)
            if D.in_mask[y] & inner or D.out_mask[y] & (inner & ~(1 << path[0])):
                continue
            if D.out_mask[y] >> x & 1:
                continue
            if len(path) >= 2 and D.in_mask[y] >> path[0] & 1:
                continue
            extend(path + [y], mask | 1 << y)

    for s in range(D.n):
        extend([s], 1 << s)
    return out


def directed_prune_checks(D: Digraph, max_len: int = 6) -> DirectedFacts:
    facts = DirectedFacts()
    for u, v in sorted(D.arcs):
        if not triangulated(D, u, v):
            facts.must_label.add((u, v))
    for cyc in induced_cycles(D, max_len):
        facts.unlabeled_cycles.append(cyc)
        arcs = [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
        if not facts.certified_no and all(a in facts.must_label for a in arcs):
            facts.certified_no = True
            facts.reason = f"induced cycle {cyc} consists of non-triangulated arcs"
    return facts
