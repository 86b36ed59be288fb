"""Splitting instances at bridges and removing redundant pendant vertices."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .core import Digraph, Edge, Labeling, RealizeResult, Variant, Verdict, check_realization
from .labels import FracEntries, MonotoneMap, compress, frugalize, lift
from .solid import (BridgeInfo, SolidGraph, classified_bridges, components,
                    plausible_reachability, reach_across, solid_graph, spanning_violation)


@dataclass(frozen=True)
class CertifiedNo:
    reason: str

    def __bool__(self) -> bool:
        return False


@dataclass
class Piece:
    D: Digraph
    old: list[int]          # piece vertex -> parent vertex, -1 for attached leaves
    out_leaf: int | None = None
    in_leaf: int | None = None


@dataclass
class SplitOutcome:
    kind: str               # "nonspecial" | "special"
    edge: Edge
    pieces: list[Piece]


def _bridge(D: Digraph, u: int, v: int, G: SolidGraph | None = None) -> BridgeInfo:
    G = G or solid_graph(D)
    for b in classified_bridges(D, G):
        if b.edge == (min(u, v), max(u, v)):
            return b.oriented(u)
    raise ValueError(f"{{{u},{v}}} is not a solid bridge")


def _induced_piece(D: Digraph, vertices) -> Piece:
    sub, old = D.induced(sorted(vertices))
    return Piece(sub, old)


def split_nonspecial(D: Digraph, u: int, v: int) -> SplitOutcome:
    b = _bridge(D, u, v)
    if b.special:
        raise ValueError(f"bridge {b.edge} is special")
    return SplitOutcome("nonspecial", b.edge,
                        [_induced_piece(D, b.side_u | {v}), _induced_piece(D, b.side_v | {u})])


def _special_piece(D: Digraph, b: BridgeInfo, info) -> Piece:
    """Piece on u's side: D[G_u + v] with out-/in-leaves attached to v."""
    u, v = b.u, b.v
    verts = sorted(b.side_u | {v})
    pos = {x: i for i, x in enumerate(verts)}
    arcs = {(pos[x], pos[y]) for x, y in D.arcs if x in pos and y in pos}
    old = list(verts)
    out_leaf = in_leaf = None
    R = info.classes_u
    if info.witness_uv is not None:
        out_leaf = len(old)
        old.append(-1)
        arcs |= {(out_leaf, pos[v]), (pos[v], out_leaf)}
        for w in b.side_u:
            if R[w] == R[u]:
                arcs.add((pos[w], out_leaf))
    if info.witness_vu is not None:
        in_leaf = len(old)
        old.append(-1)
        arcs |= {(in_leaf, pos[v]), (pos[v], in_leaf)}
        c = info.witness_vu[0]
        for w in reach_across(D, c, b.side_u):
            arcs.add((in_leaf, pos[w]))
        if out_leaf is not None:
            arcs.add((in_leaf, out_leaf))
    return Piece(Digraph(len(old), frozenset(arcs)), old, out_leaf, in_leaf)


def split_special(D: Digraph, u: int, v: int, variant: Variant) -> SplitOutcome | CertifiedNo:
    b = _bridge(D, u, v)
    if not b.special:
        raise ValueError(f"bridge {b.edge} is not special")
    if not variant.is_any_strict or variant.directed:
        return CertifiedNo(f"special bridge {b.edge} cannot be realized under {variant}")
    info = plausible_reachability(D, b)
    if not info.ok:
        return CertifiedNo(f"special bridge {b.edge} lacks plausible reachability: {info.reason}")
    rev = plausible_reachability(D, b.oriented(v))
    return SplitOutcome("special", b.edge, [_special_piece(D, b, info), _special_piece(D, b.oriented(v), rev)])


def remove_redundant_pendant(D: Digraph, v: int, w: int, variant: Variant) -> tuple[Digraph, list[int]] | CertifiedNo:
    """Drop pendant v when it is a twin of pendant w; returns the piece and its vertex map."""
    G = solid_graph(D)
    if G.degree(v) != 1 or G.degree(w) != 1 or G.adj[v] != G.adj[w] or v == w:
        raise ValueError("v and w must be distinct degree-1 vertices with a common neighbor")
    if D.has(v, w) or D.has(w, v):
        raise ValueError("v and w must not be joined by an arc")
    if not variant.strict or variant.proper or variant.directed:
        return CertifiedNo(f"pendants {v},{w} need a shared label, impossible under {variant}")
    for x in range(D.n):
        if x in (v, w):
            continue
        if D.has(v, x) != D.has(w, x) or D.has(x, v) != D.has(x, w):
            return CertifiedNo(f"pendants {v},{w} must share a label but differ at {x}")
    return D.induced([x for x in range(D.n) if x != v])


# ---------------------------------------------------------------- split tree

@dataclass
class SplitNode:
    D: Digraph
    op: str = "leaf"        # leaf | components | nonspecial | special | pendant
    children: list["SplitNode"] = field(default_factory=list)
    maps: list[list[int]] = field(default_factory=list)   # child vertex -> this vertex
    outcome: SplitOutcome | None = None
    pendant: tuple[int, int] | None = None                # (removed v, twin w)

    def leaves(self) -> list["SplitNode"]:
        if self.op == "leaf":
            return [self]
        return [x for c in self.children for x in c.leaves()]


def _pendant_pair(D: Digraph, G: SolidGraph):
    for u in range(D.n):
        pend = sorted(x for x in G.adj[u] if G.degree(x) == 1)
        for i, x in enumerate(pend):
            for y in pend[i + 1:]:
                if not D.has(x, y) and not D.has(y, x):
                    return x, y
    return None


def exhaust_splits(D: Digraph, variant: Variant, split_special_bridges: bool = True) -> SplitNode | CertifiedNo:
    """Apply component splitting, bridge splits and pendant removal until none applies.

    Special bridges are split only when both pieces come out smaller than D.
    """
    if variant.directed:
        return SplitNode(D)
    G = solid_graph(D)
    comps = components(G)
    if len(comps) > 1:
        where = {x: i for i, c in enumerate(comps) for x in c}
        for x, y in D.arcs:
            if where[x] != where[y]:
                return CertifiedNo(f"arc ({x},{y}) joins different solid components")
        node = SplitNode(D, "components")
        for c in comps:
            sub, old = D.induced(c)
            child = exhaust_splits(sub, variant, split_special_bridges)
            if isinstance(child, CertifiedNo):
                return child
            node.children.append(child)
            node.maps.append(old)
        return node

    bridges = classified_bridges(D, G)
    for b in bridges:
        why = spanning_violation(D, b)
        if why is not None:
            return CertifiedNo(why)
    for b in bridges:
        if b.special and not (variant.is_any_strict and not split_special_bridges):
            out = split_special(D, b.u, b.v, variant)
            if isinstance(out, CertifiedNo):
                return out
            if all(p.D.n < D.n for p in out.pieces):
                return _recurse(D, "special", out, variant, split_special_bridges)
    for b in bridges:
        if not b.special and len(b.side_u) > 1 and len(b.side_v) > 1:
            return _recurse(D, "nonspecial", split_nonspecial(D, b.u, b.v), variant,
                            split_special_bridges)
    pair = _pendant_pair(D, G)
    if pair is not None:
        v, w = pair
        out = remove_redundant_pendant(D, v, w, variant)
        if isinstance(out, CertifiedNo):
            return out
        sub, old = out
        child = exhaust_splits(sub, variant, split_special_bridges)
        if isinstance(child, CertifiedNo):
            return child
        return SplitNode(D, "pendant", [child], [old], pendant=(v, w))
    return SplitNode(D)


def _recurse(D: Digraph, op: str, out: SplitOutcome, variant: Variant,
             split_special_bridges: bool) -> SplitNode | CertifiedNo:
    node = SplitNode(D, op, outcome=out)
    for p in out.pieces:
        child = exhaust_splits(p.D, variant, split_special_bridges)
        if isinstance(child, CertifiedNo):
            return child
        node.children.append(child)
        node.maps.append(p.old)
    return node


# ---------------------------------------------------------------- merging

def _translate_to(entries: FracEntries, e: Edge, target: Fraction) -> FracEntries:
    (x,) = entries[e]
    return {k: tuple(t - x + target for t in ls) for k, ls in entries.items()}


def merge_nonspecial(D: Digraph, out: SplitOutcome, witnesses: list[Labeling], variant: Variant) -> Labeling:
    e = out.edge
    lifted = []
    for p, lab in zip(out.pieces, witnesses):
        loc = tuple(p.old.index(x) for x in e)
        if len(lab.get(*loc)) != 1:
            lab = frugalize(p.D, lab, variant)
        lifted.append(lift(lab, p.old))
    first, second = lifted
    (target,) = first[e]
    merged = dict(first)
    merged.update(_translate_to(second, e, target))
    return compress(merged, D.n)


def merge_special(D: Digraph, out: SplitOutcome, witnesses: list[Labeling], variant: Variant) -> Labeling:
    e = out.edge
    parts = []
    for p, lab in zip(out.pieces, witnesses):
        loc = tuple(p.old.index(x) for x in e)
        if len(lab.get(*loc)) != 2:
            lab = frugalize(p.D, lab, variant)
        alpha, beta = (Fraction(4 * t) for t in lab.get(*loc))
        leaves = {x for x in (p.out_leaf, p.in_leaf) if x is not None}
        entries: FracEntries = {}
        for (x, y), ls in lab.entries.items():
            if {x, y} & leaves or {x, y} == set(loc):
                continue
            # labels on this side are shifted off alpha/beta when no leaf pins them there
            vals = [Fraction(4 * t) for t in ls]
            if p.out_leaf is None:
                vals = [t - 1 if t <= alpha else t for t in vals]
            if p.in_leaf is None:
                vals = [t + 1 if t >= beta else t for t in vals]
            entries[(x, y)] = tuple(vals)
        parts.append((p, entries, alpha, beta))
    _, _, A, B = parts[0]
    merged: FracEntries = {}
    for p, entries, alpha, beta in parts:
        f = MonotoneMap([(alpha, A), (beta, B)])
        for (x, y), ls in entries.items():
            a, b = p.old[x], p.old[y]
            merged[(min(a, b), max(a, b))] = tuple(f(t) for t in ls)
    merged[e] = (A, B)
    return compress(merged, D.n)


def merge_pendant(D: Digraph, node: SplitNode, witness: Labeling, variant: Variant) -> Labeling:
    v, w = node.pendant
    old = node.maps[0]
    (u,) = solid_graph(D).adj[w]
    # the copied twin edge must carry a single label
    loc = (old.index(u), old.index(w))
    if len(witness.get(*loc)) != 1:
        witness = frugalize(node.children[0].D, witness, variant)
    entries = lift(witness, old)
    entries[(min(u, v), max(u, v))] = entries[(min(u, w), max(u, w))]
    return compress(entries, D.n)


def recompose(node: SplitNode, solve_leaf: Callable[[Digraph], RealizeResult],
              variant: Variant) -> RealizeResult:
    """Solve the leaf pieces and merge their witnesses back up the split tree."""
    if node.op == "leaf":
        return solve_leaf(node.D)
    results = []
    for child in node.children:
        r = recompose(child, solve_leaf, variant)
        if r.verdict is not Verdict.YES:
            return r
        results.append(r)
    wits = [r.labeling for r in results]
    if node.op == "components":
        entries: FracEntries = {}
        for old, lab in zip(node.maps, wits):
            entries.update(lift(lab, old))
        lab = compress(entries, node.D.n)
    elif node.op == "nonspecial":
        lab = merge_nonspecial(node.D, node.outcome, wits, variant)
    elif node.op == "special":
        lab = merge_special(node.D, node.outcome, wits, variant)
    else:
        lab = merge_pendant(node.D, node, wits[0], variant)
    method = "+".join(sorted({r.method for r in results}))
    chk = check_realization(node.D, lab, variant)
    if not chk:
        raise AssertionError(f"merged witness failed after {node.op} split: {chk.mismatch}")
    return RealizeResult(Verdict.YES, lab, method)
