"""Set Cover reduction: hardness for the feedback vertex set parameter."""
from __future__ import annotations

import json
from dataclasses import dataclass

from ..core import ANY_STRICT, SIMPLE_STRICT
from ..solid import components, solid_graph
from .base import Builder, GeneratedInstance, degree_certificates


class SetCoverError(ValueError):
    pass


@dataclass(frozen=True)
class SetCoverInstance:
    universe: tuple
    sets: tuple[tuple, ...]
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise SetCoverError("k must be positive")
        if len(set(self.universe)) != len(self.universe):
            raise SetCoverError("universe has repeated elements")
        if len(self.sets) < self.k:
            raise SetCoverError(f"family has {len(self.sets)} sets, fewer than k={self.k}")
        uni = set(self.universe)
        for idx, F in enumerate(self.sets):
            if not F:
                raise SetCoverError(f"set {idx} is empty")
            if not set(F) <= uni:
                raise SetCoverError(f"set {idx} has elements outside the universe")
        covered = set().union(*map(set, self.sets))
        if uni - covered:
            raise SetCoverError(f"elements {sorted(uni - covered, key=str)} lie in no set")

    @classmethod
    def from_json(cls, text: str) -> "SetCoverInstance":
        try:
            data = json.loads(text)
            return cls(tuple(data["universe"]), tuple(tuple(F) for F in data["sets"]), int(data["k"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise SetCoverError(f"malformed set cover JSON: {exc}") from None


def _tag(x) -> str:
    return str(x)


def gen_setcover(inst: SetCoverInstance, cover: list[int] | None = None) -> GeneratedInstance:
    """`cover` lists set indices (0-based); at most k of them must cover the universe."""
    U, family, k = inst.universe, inst.sets, inst.k
    r = len(family)
    B = Builder()
    top = "T"
    B.vertex(top)
    for u in U:
        B.vertex(f"u:{_tag(u)}")
    slot = {}
    for i in range(1, k + 1):
        a, a2, b, b2, c, bot = (f"{p}{i}" for p in ("a", "a'", "b", "b'", "c", "bot"))
        slot[i] = (a, a2, b, b2, c, bot)
        B.solid(a, a2)
        B.solid(a2, c)
        B.solid(c, b2)
        B.solid(b2, b)
        B.solid(c, top)
        # the witness realizes (a', b') rather than (a', b); the adjacency table agrees
        for x, y in ((a2, b2), (b, a), (b, c), (c, a), (a2, top), (b, top), (top, b2)):
            B.arc(x, y)
    gadgets = {}
    for i in range(1, k + 1):
        a, a2, b, b2, c, bot = slot[i]
        for x, F in enumerate(family):
            for u in F:
                w, v, q, uu = f"w{i}[{x},{_tag(u)}]", f"v{i}[{x},{_tag(u)}]", f"q{i}[{x},{_tag(u)}]", f"u:{_tag(u)}"
                gadgets[(i, x, u)] = (w, v, q)
                for p, s in ((uu, w), (w, a), (w, b), (w, c), (w, v), (w, q), (v, bot), (q, top)):
                    B.solid(p, s)
                for p, s in ((uu, v), (v, a), (b, v), (w, top), (w, b2), (a2, w),
                             (q, v), (q, a), (q, b), (q, b2), (q, c)):
                    B.arc(p, s)
    for u in U:
        uu = f"u:{_tag(u)}"
        B.arc(uu, top)
        for i in range(1, k + 1):
            a, a2, b, b2, c, bot = slot[i]
            for y in (a, b, b2, c):
                B.arc(uu, y)
    for (i, x, ux), (_, vx, _) in gadgets.items():
        for (j, y, uy), (_, vy, _) in gadgets.items():
            if i == j and x < y:
                B.arc(vx, vy)
    D = B.digraph()
    fvs = [B.pos[top]] + [B.pos[s] for i in range(1, k + 1) for s in slot[i]]
    cert = degree_certificates(D)
    cert["feedback_vertex_set"] = fvs
    cert["fvs_size"] = len(fvs)
    cert["fvs_tree_depth"] = _forest_depth(D, fvs)
    out = GeneratedInstance(D, B.names, certificates=cert)
    if cover is not None:
        chosen = _pad_cover(inst, cover)
        alpha = {x: x + 3 for x in range(r)}        # sets are 0-based here
        for u in U:
            for s in B.names:
                if D.has(B.pos[f"u:{_tag(u)}"], B.pos[s]) and D.has(B.pos[s], B.pos[f"u:{_tag(u)}"]):
                    B.label(f"u:{_tag(u)}", s, [1])
        for s in B.names:
            if s != top and D.has(B.pos[top], B.pos[s]) and D.has(B.pos[s], B.pos[top]):
                B.label(top, s, [r + 3])
        for i in range(1, k + 1):
            a, a2, b, b2, c, bot = slot[i]
            B.label(a, a2, [r + 4])
            B.label(b, b2, [r + 4])
            B.label(a2, c, [2])
            B.label(c, b2, [r + 5])
        for (i, x, u), (w, v, q) in gadgets.items():
            a, a2, b, b2, c, bot = slot[i]
            B.label(w, v, [alpha[x]])
            B.label(v, bot, [alpha[x]])
            B.label(w, q, [1])
            B.label(w, a, [r + 5])
            B.label(w, b, [2])
            if chosen[i - 1] == x:
                B.label(w, c, [alpha[x]])
        out.witness = B.labeling()
        out.variants = (ANY_STRICT, SIMPLE_STRICT)
        out.certify()
    return out


def _pad_cover(inst: SetCoverInstance, cover: list[int]) -> list[int]:
    chosen = list(dict.fromkeys(cover))
    if any(not 0 <= x < len(inst.sets) for x in chosen):
        raise SetCoverError("cover refers to a missing set")
    if len(chosen) > inst.k:
        raise SetCoverError(f"cover has {len(chosen)} sets, more than k={inst.k}")
    if set(inst.universe) - set().union(*(set(inst.sets[x]) for x in chosen)):
        raise SetCoverError("cover misses some element")
    spare = [x for x in range(len(inst.sets)) if x not in chosen]
    return chosen + spare[:inst.k - len(chosen)]


def _forest_depth(D, removed: list[int]) -> int | None:
    """Max radius of the trees left after deleting `removed`, or None if a cycle remains."""
    G = solid_graph(D)
    gone = set(removed)
    depth = 0
    for comp in components(G, removed):
        cs = set(comp)
        ecount = sum(1 for x in comp for y in G.adj[x] if y in cs) // 2
        if ecount != len(comp) - 1:
            return None
        best = None
        for root in comp:
            dist = {root: 0}
            frontier = [root]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in G.adj[x]:
                        if y in cs and y not in dist and y not in gone:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            ecc = max(dist.values())
            best = ecc if best is None else min(best, ecc)
        depth = max(depth, best)
    return depth
