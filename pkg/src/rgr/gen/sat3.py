"""Triangle-free reduction from 2P2N-3SAT for the strict undirected variants."""
from __future__ import annotations

from itertools import combinations

from ..core import ANY_STRICT, SIMPLE_STRICT
from .base import Builder, GeneratedInstance, degree_certificates
from .cnf import CnfError, CnfFormula

# Variable gadget adjacency. Rows and columns follow GADGET_COLUMNS; "1" with a
# symmetric "1" is a solid edge, "H" marks a dashed arc, "-" the diagonal.
# s_i / s_j stand for a clause source with a positive / negative occurrence of x,
# t_k / t_l for terminals of clauses containing x.
GADGET_COLUMNS = ("s_i", "s_j", "t_k", "t_l", "x", "nx", "a_x", "a_nx", "a_xnx", "b_x", "b_nx",
                  "b_xnx", "c_x", "f_x", "f_nx", "f_xnx", "q_x", "q_nx", "q_ax", "q_anx")
GADGET_MATRIX = """
s_i    - 0 H H 1 0 H H H H 0 0 H H 0 0 0 0 0 0
s_j    0 - H H 0 1 0 H H 0 H 0 H 0 H 0 0 0 0 0
t_k    0 0 - H 0 0 0 0 H 0 0 0 1 0 0 0 1 1 1 1
t_l    0 0 0 - 0 0 0 0 H 0 0 0 1 0 0 0 1 1 1 1
x      1 0 H H - 0 1 H H 1 0 0 1 1 0 0 1 0 0 0
nx     0 1 H H 0 - 0 1 H 0 1 0 1 0 1 0 0 1 0 0
a_x    0 0 H H 1 0 - H 1 H 0 0 H H 0 0 0 0 1 0
a_nx   0 0 H H 0 1 0 - 1 0 H 0 H 0 H 0 0 0 0 1
a_xnx  0 0 0 0 0 0 1 1 - 0 0 0 1 0 0 0 0 0 0 0
b_x    0 0 0 0 1 H 0 0 0 - H 1 0 0 0 0 0 0 0 0
b_nx   0 0 0 0 0 1 0 0 0 0 - 1 0 0 0 0 0 0 0 0
b_xnx  0 0 H H H H 0 0 H 1 1 - 1 0 0 0 0 0 0 0
c_x    0 0 1 1 1 1 0 0 1 H H 1 - 0 0 0 0 0 0 0
f_x    0 0 0 0 1 0 0 0 0 H 0 0 0 - H 1 0 0 0 0
f_nx   0 0 0 0 0 1 0 0 0 0 H 0 0 0 - 1 0 0 0 0
f_xnx  0 0 0 0 0 0 0 0 0 0 0 0 0 1 1 - 0 0 0 0
q_x    H 0 1 1 1 0 H H H H 0 0 H H 0 0 - 0 0 0
q_nx   0 H 1 1 0 1 0 H H 0 H 0 H 0 H 0 0 - 0 0
q_ax   0 0 1 1 H 0 1 H H H 0 0 H H 0 0 0 0 - 0
q_anx  0 0 1 1 0 H 0 1 H 0 H 0 H 0 H 0 0 0 0 -
"""

CLAUSE_ROLES = GADGET_COLUMNS[:4]
GADGET_VERTICES = GADGET_COLUMNS[4:]

# witness labels inside one gadget, independent of the assignment
GADGET_LABELS = {
    ("c_x", "b_xnx"): 1, ("x", "q_x"): 1, ("nx", "q_nx"): 1, ("a_x", "q_ax"): 1, ("a_nx", "q_anx"): 1,
    ("b_x", "b_xnx"): 2, ("b_nx", "b_xnx"): 3, ("x", "a_x"): 12,
    ("a_x", "a_xnx"): 13, ("nx", "a_nx"): 13, ("x", "f_x"): 13, ("f_x", "f_xnx"): 13,
    ("a_nx", "a_xnx"): 14, ("x", "b_x"): 14, ("nx", "f_nx"): 14, ("f_nx", "f_xnx"): 14,
    ("nx", "b_nx"): 15, ("c_x", "a_xnx"): 25,
}


def gadget_table() -> dict[tuple[str, str], str]:
    """(row, column) -> entry of the transcribed matrix."""
    rows = [line.split() for line in GADGET_MATRIX.strip().splitlines()]
    table = {}
    for row in rows:
        name, cells = row[0], row[1:]
        if len(cells) != len(GADGET_COLUMNS):
            raise AssertionError(f"row {name} has {len(cells)} cells")
        for col, cell in zip(GADGET_COLUMNS, cells):
            table[(name, col)] = cell
    return table


def gadget_relations() -> tuple[set[frozenset[str]], set[tuple[str, str]]]:
    """Solid pairs and dashed arcs encoded by the matrix."""
    t = gadget_table()
    solid, dashed = set(), set()
    for a in GADGET_COLUMNS:
        for b in GADGET_COLUMNS:
            if a == b:
                continue
            ab, ba = t[(a, b)], t[(b, a)]
            if ab == "1":
                if ba != "1":
                    raise AssertionError(f"unhighlighted one-way entry {a}->{b}")
                solid.add(frozenset((a, b)))
            elif ab == "H":
                if ba != "0":
                    raise AssertionError(f"highlighted entry {a}->{b} has a reverse entry")
                dashed.add((a, b))
    return solid, dashed


def clause_coloring(phi: CnfFormula) -> list[int]:
    """Greedy colors in 1..10 so that clauses sharing a variable differ."""
    colors: list[int] = []
    for i in range(len(phi.clauses)):
        used = {colors[j] for j in range(i) if phi.variables_of(i) & phi.variables_of(j)}
        c = min(set(range(1, 11)) - used, default=None)
        if c is None:
            raise CnfError(f"clause {i + 1} shares variables with too many clauses")
        colors.append(c)
    return colors


def _v(name: str, x: int) -> str:
    return f"{name}[{x}]"


def gen_sat_trianglefree(phi: CnfFormula, assignment: dict[int, bool] | None = None) -> GeneratedInstance:
    phi.require_2p2n()
    if assignment is not None and not phi.satisfied_by(assignment):
        raise CnfError("assignment does not satisfy the formula")
    solid, dashed = gadget_relations()
    chi = clause_coloring(phi)
    B = Builder()
    for x in range(1, phi.nvars + 1):
        for name in GADGET_VERTICES:
            B.vertex(_v(name, x))
    m = len(phi.clauses)
    for i in range(m):
        B.vertex(f"s{i + 1}")
        B.vertex(f"t{i + 1}")

    def role(r: str, x: int, i: int) -> str:
        if r in CLAUSE_ROLES:
            return f"s{i + 1}" if r.startswith("s") else f"t{i + 1}"
        return _v(r, x)

    for x in range(1, phi.nvars + 1):
        for pair in solid:
            a, b = sorted(pair)
            if a in GADGET_VERTICES and b in GADGET_VERTICES:
                B.solid(_v(a, x), _v(b, x))
        for a, b in dashed:
            if a in GADGET_VERTICES and b in GADGET_VERTICES:
                B.arc(_v(a, x), _v(b, x))
    # clause-to-gadget relations, read off the representative rows and columns
    for i, clause in enumerate(phi.clauses):
        roles = set()
        for lit in clause:
            roles.add(("s_i" if lit > 0 else "s_j", abs(lit)))
            roles.add(("t_k", abs(lit)))
        for r, x in roles:
            for pair in solid:
                if r in pair:
                    (other,) = pair - {r}
                    if other in GADGET_VERTICES:
                        B.solid(role(r, x, i), _v(other, x))
            for a, b in dashed:
                if a == r and b in GADGET_VERTICES:
                    B.arc(role(r, x, i), _v(b, x))
                elif b == r and a in GADGET_VERTICES:
                    B.arc(_v(a, x), role(r, x, i))
        B.arc(f"s{i + 1}", f"t{i + 1}")
    for i, j in combinations(range(m), 2):
        if not phi.variables_of(i) & phi.variables_of(j):
            continue
        if chi[i] > chi[j]:
            i, j = j, i
        si, sj, ti, tj = f"s{i + 1}", f"s{j + 1}", f"t{i + 1}", f"t{j + 1}"
        for a, b in ((i, j), (j, i)):
            q = f"q({a + 1},{b + 1})"
            B.solid(f"s{a + 1}", q)
            B.solid(q, f"t{b + 1}")
        B.arc(si, tj)
        B.arc(sj, ti)
        B.arc(ti, tj)
        if set(phi.clauses[i]) & set(phi.clauses[j]):
            B.arc(si, sj)
    D = B.digraph()
    inst = GeneratedInstance(D, B.names, certificates=degree_certificates(D))
    inst.certificates["coloring"] = chi
    if assignment is not None:
        for x in range(1, phi.nvars + 1):
            for (a, b), t in GADGET_LABELS.items():
                B.label(_v(a, x), _v(b, x), [t])
            if assignment[x]:
                B.label(_v("x", x), _v("c_x", x), [13])
            else:
                B.label(_v("nx", x), _v("c_x", x), [14])
        for i in range(m):
            for v in B.names:
                u = B.pos[v]
                if D.has(u, B.pos[f"s{i + 1}"]) and D.has(B.pos[f"s{i + 1}"], u):
                    B.label(f"s{i + 1}", v, [chi[i] + 1])
                if D.has(u, B.pos[f"t{i + 1}"]) and D.has(B.pos[f"t{i + 1}"], u):
                    B.label(f"t{i + 1}", v, [chi[i] + 14])
        inst.witness = B.labeling()
        inst.variants = (ANY_STRICT, SIMPLE_STRICT)
        inst.certify()
    return inst
