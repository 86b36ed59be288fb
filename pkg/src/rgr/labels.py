"""Order-preserving label maps, compression to integers and the frugality post-pass."""
from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping

from .core import Digraph, Edge, Labeling, Variant, check_realization
from .solid import BridgeKind, classified_bridges

FracEntries = dict[Edge, tuple[Fraction, ...]]


class MonotoneMap:
    """Strictly increasing piecewise-linear map through the given anchor points.

    Outside the anchors the map is a translation, so the whole line is covered.
    """

    def __init__(self, anchors: Iterable[tuple[Fraction, Fraction]]) -> None:
        pts = sorted({(Fraction(a), Fraction(b)) for a, b in anchors})
        for (a0, b0), (a1, b1) in zip(pts, pts[1:]):
            if a0 == a1 or b1 <= b0:
                raise ValueError(f"anchors not strictly increasing: {pts}")
        self.src = [a for a, _ in pts]
        self.dst = [b for _, b in pts]

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if not self.src:
            return x
        i = bisect_left(self.src, x)
        if i < len(self.src) and self.src[i] == x:
            return self.dst[i]
        if i == 0:
            return x - self.src[0] + self.dst[0]
        if i == len(self.src):
            return x - self.src[-1] + self.dst[-1]
        a0, a1 = self.src[i - 1], self.src[i]
        b0, b1 = self.dst[i - 1], self.dst[i]
        return b0 + (x - a0) * (b1 - b0) / (a1 - a0)


def to_fractions(lab: Labeling) -> FracEntries:
    return {e: tuple(Fraction(t) for t in ls) for e, ls in lab.entries.items()}


def apply_map(entries: Mapping[Edge, Iterable], f: Callable) -> FracEntries:
    return {e: tuple(sorted({Fraction(f(t)) for t in ls})) for e, ls in entries.items()}


def compress(entries: Mapping[Edge, Iterable], n: int, directed: bool = False) -> Labeling:
    """Replace label values by their rank 1..K among all distinct values."""
    values = sorted({Fraction(t) for ls in entries.values() for t in ls})
    rank = {v: i + 1 for i, v in enumerate(values)}
    return Labeling(n, {e: [rank[Fraction(t)] for t in ls] for e, ls in entries.items()}, directed)


def compress_labeling(lab: Labeling) -> Labeling:
    return compress(lab.entries, lab.n, lab.directed)


def bridge_kinds(D: Digraph) -> dict[Edge, BridgeKind]:
    return {b.edge: b.kind for b in classified_bridges(D)}


def _greedy_remove(D: Digraph, lab: Labeling, variant: Variant) -> Labeling:
    lab = lab.copy()
    changed = True
    while changed:
        changed = False
        for e, ls in lab.items():
            if len(ls) <= 1:
                continue
            for t in sorted(ls, reverse=True):
                trial = lab.copy()
                trial.set(*e, [x for x in lab.get(*e) if x != t])
                if check_realization(D, trial, variant):
                    lab = trial
                    changed = True
                    break
    return lab


def _candidate_positions(lab: Labeling) -> list[Fraction]:
    vals = sorted({Fraction(t) for ls in lab.entries.values() for t in ls})
    mids = [(a + b) / 2 for a, b in zip(vals, vals[1:])]
    if vals:
        mids += [vals[0] - 1, vals[-1] + 1]
    return sorted(set(vals) | set(mids))


def _reshape_bridge(D: Digraph, lab: Labeling, variant: Variant, e: Edge, target: int) -> Labeling | None:
    """Try to give bridge e exactly `target` labels at existing or in-between positions."""
    frac = to_fractions(lab)
    cur = frac[e]
    if target == 1 and len(cur) == 2:
        first = [(cur[0] + cur[1]) / 2]
    else:
        first = []
    cands = _candidate_positions(lab)
    lo, hi = min(cur), max(cur)
    cands = [c for c in cands if lo <= c <= hi]
    tried = set()
    options = [tuple(first)] if first else []
    options += list(combinations(cands, target))
    for opt in options:
        if opt in tried:
            continue
        tried.add(opt)
        trial = dict(frac)
        trial[e] = tuple(opt)
        cand = compress(trial, lab.n, lab.directed)
        if check_realization(D, cand, variant):
            return cand
    return None


def frugalize(D: Digraph, lab: Labeling, variant: Variant) -> Labeling:
    """Shrink a realization so no label is removable and bridges carry their frugal count.

    The input must already realize D; so does the output.
    """
    if not check_realization(D, lab, variant):
        raise ValueError("frugalize needs a realization")
    lab = _greedy_remove(D, lab, variant)
    if not variant.directed:
        kinds = bridge_kinds(D)
        for e, kind in sorted(kinds.items()):
            target = 2 if kind is BridgeKind.SPECIAL else 1
            if len(lab.get(*e)) > target:
                new = _reshape_bridge(D, lab, variant, e, target)
                if new is not None:
                    lab = _greedy_remove(D, new, variant)
    return compress_labeling(lab)


def frugality_violations(D: Digraph, lab: Labeling) -> list[str]:
    """Bridges whose label count differs from 2 (special) or 1 (non-special)."""
    out = []
    for e, kind in sorted(bridge_kinds(D).items()):
        want = 2 if kind is BridgeKind.SPECIAL else 1
        got = len(lab.get(*e))
        if got != want:
            out.append(f"{kind.value} bridge {e} has {got} labels")
    return out


def shift(lab: Labeling, offset: int) -> Labeling:
    return Labeling(lab.n, {e: [t + offset for t in ls] for e, ls in lab.entries.items()}, lab.directed)


def lift(lab: Labeling, old: list[int]) -> FracEntries:
    """Rename a piece labeling's vertices back to parent IDs (as fractions)."""
    out: FracEntries = {}
    for (u, v), ls in lab.entries.items():
        a, b = old[u], old[v]
        key = (a, b) if lab.directed or a < b else (b, a)
        out[key] = tuple(Fraction(t) for t in ls)
    return out

