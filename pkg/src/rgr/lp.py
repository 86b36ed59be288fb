"""Exact rational LP feasibility via a phase-1 tableau simplex with Bland's rule."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

LE, GE, EQ = "<=", ">=", "=="


@dataclass
class Row:
    coeffs: dict[int, Fraction]
    sense: str
    rhs: Fraction
    tag: str = ""


@dataclass
class LinearProgram:
    """Constraints over non-negative variables; no objective."""

    names: list[str] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)

    def add_var(self, name: str) -> int:
        self.names.append(name)
        return len(self.names) - 1

    def add(self, coeffs: Mapping[int, int | Fraction], sense: str, rhs: int | Fraction = 0,
            tag: str = "") -> None:
        if sense not in (LE, GE, EQ):
            raise ValueError(f"bad sense {sense!r}")
        clean: dict[int, Fraction] = {}
        for j, c in coeffs.items():
            c = Fraction(c)
            if c:
                clean[j] = clean.get(j, Fraction(0)) + c
        self.rows.append(Row({j: c for j, c in clean.items() if c}, sense, Fraction(rhs), tag))

    def tags(self) -> list[str]:
        return [r.tag for r in self.rows]

    def satisfied_by(self, values: list[Fraction]) -> bool:
        if any(v < 0 for v in values):
            return False
        for r in self.rows:
            lhs = sum((c * values[j] for j, c in r.coeffs.items()), Fraction(0))
            if (r.sense == LE and lhs > r.rhs) or (r.sense == GE and lhs < r.rhs) \
                    or (r.sense == EQ and lhs != r.rhs):
                return False
        return True


@dataclass
class LPResult:
    feasible: bool
    values: list[Fraction] | None = None
    pivots: int = 0


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def _merge_equal_vars(lp: LinearProgram) -> tuple[list[int], list[Row]]:
    """Collapse rows x_i - x_j == 0 into shared variables."""
    uf = _UnionFind(len(lp.names))
    rest = []
    for r in lp.rows:
        if r.sense == EQ and r.rhs == 0 and len(r.coeffs) == 2 and sorted(r.coeffs.values()) == [-1, 1]:
            a, b = r.coeffs
            uf.union(a, b)
        else:
            rest.append(r)
    rep = [uf.find(j) for j in range(len(lp.names))]
    rows = []
    for r in rest:
        coeffs: dict[int, Fraction] = {}
        for j, c in r.coeffs.items():
            coeffs[rep[j]] = coeffs.get(rep[j], Fraction(0)) + c
        rows.append(Row({j: c for j, c in coeffs.items() if c}, r.sense, r.rhs, r.tag))
    return rep, rows


def solve_lp(lp: LinearProgram) -> LPResult:
    rep, rows = _merge_equal_vars(lp)
    cols = sorted(set(rep))
    col_of = {j: i for i, j in enumerate(cols)}
    nx = len(cols)

    # trivially decide rows without variables
    live = []
    for r in rows:
        if not r.coeffs:
            if (r.sense == LE and 0 > r.rhs) or (r.sense == GE and 0 < r.rhs) or (r.sense == EQ and r.rhs != 0):
                return LPResult(False)
            continue
        live.append(r)

    m = len(live)
    n_slack = sum(1 for r in live if r.sense != EQ)
    # columns: structural | slacks | artificials
    width = nx + n_slack + m
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    zero = Fraction(0)
    s_idx = nx
    for i, r in enumerate(live):
        row = [zero] * (width + 1)
        for j, c in r.coeffs.items():
            row[col_of[j]] = c
        if r.sense == LE:
            row[s_idx] = Fraction(1)
            s_idx += 1
        elif r.sense == GE:
            row[s_idx] = Fraction(-1)
            s_idx += 1
        row[width] = r.rhs
        if row[width] < 0:
            row = [-x for x in row]
        row[nx + n_slack + i] = Fraction(1)
        tab.append(row)
        basis.append(nx + n_slack + i)

    art_start = nx + n_slack
    # phase-1 objective: minimize sum of artificials; reduced costs row
    obj = [zero] * (width + 1)
    for row in tab:
        for k in range(width + 1):
            if k < art_start or k == width:
                obj[k] -= row[k]
    pivots = 0
    while True:
        enter = next((k for k in range(width) if obj[k] < 0), None)
        if enter is None:
            break
        best = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[width] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            break  # unbounded direction; cannot happen for phase 1
        pr = best[1]
        prow = tab[pr]
        piv = prow[enter]
        prow = [x / piv for x in prow]
        tab[pr] = prow
        for i, row in enumerate(tab):
            if i != pr and row[enter]:
                f = row[enter]
                tab[i] = [x - f * y for x, y in zip(row, prow)]
        if obj[enter]:
            f = obj[enter]
            obj = [x - f * y for x, y in zip(obj, prow)]
        basis[pr] = enter
        pivots += 1
    if -obj[width] != 0:
        return LPResult(False, None, pivots)
    xs = [zero] * width
    for i, b in enumerate(basis):
        xs[b] = tab[i][width]
    values = [xs[col_of[rep[j]]] for j in range(len(lp.names))]
    return LPResult(True, values, pivots)
