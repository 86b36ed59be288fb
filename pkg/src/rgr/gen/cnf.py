"""CNF formulas, DIMACS parsing and the 2P2N occurrence check."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass


class CnfError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    nvars: int
    clauses: tuple[tuple[int, ...], ...]    # DIMACS literals: +v / -v, v in 1..nvars

    def __post_init__(self) -> None:
        for i, c in enumerate(self.clauses):
            if not c:
                raise CnfError(f"clause {i + 1} is empty")
            for lit in c:
                if lit == 0 or abs(lit) > self.nvars:
                    raise CnfError(f"clause {i + 1}: literal {lit} out of range")

    @property
    def max_clause_size(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def occurrences(self) -> Counter:
        return Counter(lit for c in self.clauses for lit in c)

    @property
    def is_2p2n(self) -> bool:
        occ = self.occurrences()
        return self.max_clause_size <= 3 and all(
            occ[v] == 2 and occ[-v] == 2 for v in range(1, self.nvars + 1))

    def require_2p2n(self) -> None:
        if self.max_clause_size > 3:
            raise CnfError("clauses must have at most three literals")
        occ = self.occurrences()
        for v in range(1, self.nvars + 1):
            if occ[v] != 2 or occ[-v] != 2:
                raise CnfError(f"variable {v} occurs {occ[v]}x positively and {occ[-v]}x negatively")

    def satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment[abs(lit)] == (lit > 0) for lit in c) for c in self.clauses)

    def variables_of(self, i: int) -> set[int]:
        return {abs(lit) for lit in self.clauses[i]}

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.nvars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    nvars = None
    nclauses = None
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: bad problem line {line!r}")
            nvars, nclauses = int(parts[2]), int(parts[3])
            continue
        if nvars is None:
            raise CnfError(f"line {lineno}: clause before problem line")
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer token in {line!r}") from None
        for x in nums:
            if x == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(x)
    if cur:
        clauses.append(tuple(cur))
    if nvars is None:
        raise CnfError("missing problem line")
    if nclauses is not None and nclauses != len(clauses):
        raise CnfError(f"header declares {nclauses} clauses, found {len(clauses)}")
    return CnfFormula(nvars, tuple(clauses))


def parse_assignment(text: str, nvars: int) -> dict[int, bool]:
    """Signed integers (optionally after a leading 'v'); a trailing 0 is ignored."""
    out: dict[int, bool] = {}
    for tok in text.replace("v", " ").split():
        x = int(tok)
        if x == 0:
            continue
        if abs(x) > nvars:
            raise CnfError(f"assignment literal {x} out of range")
        out[abs(x)] = x > 0
    missing = [v for v in range(1, nvars + 1) if v not in out]
    if missing:
        raise CnfError(f"assignment misses variables {missing}")
    return out
