"""Digraphs, labelings, variants, reachability and the realization checker."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import groupby
from typing import Iterable, Mapping

Edge = tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    """Simple loop-free digraph on vertices 0..n-1."""

    n: int
    arcs: frozenset[Edge]
    out_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)
    in_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        out = [0] * self.n
        inn = [0] * self.n
        for u, v in arcs:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({u},{v}) out of range for n={self.n}")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "out_mask", tuple(out))
        object.__setattr__(self, "in_mask", tuple(inn))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Edge]) -> "Digraph":
        return cls(n, frozenset(arcs))

    def has(self, u: int, v: int) -> bool:
        return bool(self.out_mask[u] >> v & 1)

    def out_neighbors(self, u: int) -> list[int]:
        return [v for v in range(self.n) if self.out_mask[u] >> v & 1]

    def in_neighbors(self, v: int) -> list[int]:
        return [u for u in range(self.n) if self.in_mask[v] >> u & 1]

    def induced(self, vertices: Iterable[int]) -> tuple["Digraph", list[int]]:
        """Induced subdigraph; returns it with the new-to-old vertex map."""
        old = list(vertices)
        pos = {v: i for i, v in enumerate(old)}
        arcs = [(pos[u], pos[v]) for u, v in self.arcs if u in pos and v in pos]
        return Digraph(len(old), frozenset(arcs)), old

    def relabel(self, perm: list[int]) -> "Digraph":
        return Digraph(self.n, frozenset((perm[u], perm[v]) for u, v in self.arcs))

    def __len__(self) -> int:
        return len(self.arcs)


class LabelClass(enum.Enum):
    ANY = "Any"
    SIMPLE = "Simple"
    PROPER = "Proper"
    HAPPY = "Happy"


@dataclass(frozen=True)
class Variant:
    directed: bool
    label_class: LabelClass
    strict: bool = True

    def __post_init__(self) -> None:
        # proper and happy labelings make strict and non-strict paths coincide
        if self.label_class in (LabelClass.PROPER, LabelClass.HAPPY):
            object.__setattr__(self, "strict", True)

    @property
    def simple(self) -> bool:
        return self.label_class in (LabelClass.SIMPLE, LabelClass.HAPPY)

    @property
    def proper(self) -> bool:
        return self.label_class in (LabelClass.PROPER, LabelClass.HAPPY)

    @property
    def is_any_strict(self) -> bool:
        return self.label_class is LabelClass.ANY and self.strict

    @property
    def name(self) -> str:
        base = self.label_class.value
        if self.label_class in (LabelClass.ANY, LabelClass.SIMPLE):
            base += "Strict" if self.strict else "NonStrict"
        return ("Dir" if self.directed else "") + base

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> "Variant":
        key = text.strip().lower().replace("-", "").replace("_", "")
        directed = False
        for prefix in ("directed", "dir", "d:"):
            if key.startswith(prefix):
                directed, key = True, key[len(prefix):]
                break
        for prefix in ("undirected", "u:"):
            if key.startswith(prefix):
                key = key[len(prefix):]
        table = {
            "anystrict": (LabelClass.ANY, True),
            "anynonstrict": (LabelClass.ANY, False),
            "simplestrict": (LabelClass.SIMPLE, True),
            "simplenonstrict": (LabelClass.SIMPLE, False),
            "proper": (LabelClass.PROPER, True),
            "happy": (LabelClass.HAPPY, True),
        }
        if key not in table:
            raise ValueError(f"unknown variant {text!r}")
        cls_, strict = table[key]
        return cls(directed, cls_, strict)


ANY_STRICT = Variant(False, LabelClass.ANY, True)
ANY_NONSTRICT = Variant(False, LabelClass.ANY, False)
SIMPLE_STRICT = Variant(False, LabelClass.SIMPLE, True)
SIMPLE_NONSTRICT = Variant(False, LabelClass.SIMPLE, False)
PROPER = Variant(False, LabelClass.PROPER)
HAPPY = Variant(False, LabelClass.HAPPY)
UNDIRECTED_VARIANTS = (ANY_STRICT, ANY_NONSTRICT, SIMPLE_STRICT, SIMPLE_NONSTRICT, PROPER, HAPPY)
DIRECTED_VARIANTS = tuple(Variant(True, v.label_class, v.strict) for v in UNDIRECTED_VARIANTS)
ALL_VARIANTS = UNDIRECTED_VARIANTS + DIRECTED_VARIANTS


def edge_key(u: int, v: int, directed: bool) -> Edge:
    if directed or u < v:
        return (u, v)
    return (v, u)


class Labeling:
    """Map from edges (or arcs) to strictly sorted tuples of positive labels."""

    __slots__ = ("n", "directed", "entries")

    def __init__(self, n: int, entries: Mapping[Edge, Iterable[int]] | None = None,
                 directed: bool = False) -> None:
        self.n = n
        self.directed = directed
        self.entries: dict[Edge, tuple[int, ...]] = {}
        for (u, v), labels in (entries or {}).items():
            self.set(u, v, labels)

    def set(self, u: int, v: int, labels: Iterable[int]) -> None:
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"bad edge ({u},{v}) for n={self.n}")
        vals = tuple(sorted(set(labels)))
        if vals and vals[0] < 1:
            raise ValueError(f"labels must be positive, got {vals}")
        key = edge_key(u, v, self.directed)
        if vals:
            self.entries[key] = vals
        else:
            self.entries.pop(key, None)

    def get(self, u: int, v: int) -> tuple[int, ...]:
        return self.entries.get(edge_key(u, v, self.directed), ())

    def copy(self) -> "Labeling":
        lab = Labeling(self.n, directed=self.directed)
        lab.entries = dict(self.entries)
        return lab

    def items(self):
        return sorted(self.entries.items())

    @property
    def lifetime(self) -> int:
        return max((ls[-1] for ls in self.entries.values()), default=0)

    def total_labels(self) -> int:
        return sum(len(ls) for ls in self.entries.values())

    def time_edges(self) -> list[tuple[int, int, int]]:
        """All (t, u, v) traversal events; undirected edges yield both directions."""
        ev = []
        for (u, v), labels in self.entries.items():
            for t in labels:
                ev.append((t, u, v))
                if not self.directed:
                    ev.append((t, v, u))
        ev.sort()
        return ev

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Labeling) and self.n == other.n
                and self.directed == other.directed and self.entries == other.entries)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {list(v)}" for k, v in self.items())
        return f"Labeling(n={self.n}, directed={self.directed}, {{{body}}})"


@dataclass(frozen=True)
class TemporalGraph:
    """A labeling viewed as a temporal graph (edges with empty label sets are absent)."""

    labeling: Labeling

    @property
    def n(self) -> int:
        return self.labeling.n

    @property
    def directed(self) -> bool:
        return self.labeling.directed


def _as_labeling(tg: Labeling | TemporalGraph) -> Labeling:
    return tg.labeling if isinstance(tg, TemporalGraph) else tg


class Verdict(enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass
class RealizeResult:
    verdict: Verdict
    labeling: Labeling | None = None
    method: str = ""
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.verdict is Verdict.YES

    @classmethod
    def no(cls, method: str, reason: str = "", **stats) -> "RealizeResult":
        return cls(Verdict.NO, None, method, reason, dict(stats))


def reachability(tg: Labeling | TemporalGraph, strict: bool = True) -> Digraph:
    """Reachability graph by earliest-arrival propagation over time-sorted events."""
    lab = _as_labeling(tg)
    n = lab.n
    groups = [(t, [(u, v) for _, u, v in grp])
              for t, grp in groupby(lab.time_edges(), key=lambda e: e[0])]
    arcs = []
    inf = float("inf")
    for s in range(n):
        arr = [inf] * n
        arr[s] = 0
        for t, evs in groups:
            if strict:
                hits = [v for u, v in evs if arr[u] < t and arr[v] > t]
                for v in hits:
                    arr[v] = t
            else:
                changed = True
                while changed:
                    changed = False
                    for u, v in evs:
                        if arr[u] <= t and arr[v] > t:
                            arr[v] = t
                            changed = True
        arcs.extend((s, v) for v in range(n) if v != s and arr[v] < inf)
    return Digraph(n, frozenset(arcs))


def validate_label_class(tg: Labeling | TemporalGraph, label_class: LabelClass) -> tuple[bool, str]:
    """Check the labeling class; returns (ok, description of first violation)."""
    lab = _as_labeling(tg)
    if label_class in (LabelClass.SIMPLE, LabelClass.HAPPY):
        for e, ls in lab.items():
            if len(ls) > 1:
                return False, f"edge {e} has {len(ls)} labels"
    if label_class in (LabelClass.PROPER, LabelClass.HAPPY):
        seen: dict[tuple[int, int], Edge] = {}
        if lab.directed:
            # consecutive arcs (x,y),(y,z) with z != x may not share a label
            into: dict[tuple[int, int], list[Edge]] = {}
            for (u, v), ls in lab.items():
                for t in ls:
                    into.setdefault((v, t), []).append((u, v))
            for (u, v), ls in lab.items():
                for t in ls:
                    for (x, _) in into.get((u, t), ()):
                        if x != v:
                            return False, f"arcs ({x},{u}) and ({u},{v}) share label {t}"
        else:
            for e, ls in lab.items():
                for t in ls:
                    for w in e:
                        other = seen.get((w, t))
                        if other is not None:
                            return False, f"edges {other} and {e} share label {t} at {w}"
                        seen[(w, t)] = e
    return True, ""


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    mismatch: str = ""

    def __bool__(self) -> bool:
        return self.ok


def solid_pairs(D: Digraph) -> set[Edge]:
    return {(u, v) for u, v in D.arcs if u < v and D.has(v, u)}


def check_realization(D: Digraph, tg: Labeling | TemporalGraph, variant: Variant) -> CheckResult:
    """True iff the labeling realizes D under the variant."""
    lab = _as_labeling(tg)
    if lab.n != D.n:
        raise ValueError(f"dimension mismatch: labeling has n={lab.n}, instance has n={D.n}")
    if lab.directed != variant.directed:
        return CheckResult(False, "labeling direction does not match variant")
    for (u, v) in lab.entries:
        if variant.directed:
            if not D.has(u, v):
                return CheckResult(False, f"arc ({u},{v}) labeled but not in D")
        elif not (D.has(u, v) and D.has(v, u)):
            return CheckResult(False, f"edge {{{u},{v}}} labeled but not solid")
    ok, why = validate_label_class(lab, variant.label_class)
    if not ok:
        return CheckResult(False, f"class {variant.label_class.value} violated: {why}")
    R = reachability(lab, variant.strict)
    if R.arcs != D.arcs:
        missing = sorted(D.arcs - R.arcs)
        extra = sorted(R.arcs - D.arcs)
        if missing:
            return CheckResult(False, f"arc {missing[0]} not realized")
        return CheckResult(False, f"non-arc {extra[0]} realized")
    return CheckResult(True)
