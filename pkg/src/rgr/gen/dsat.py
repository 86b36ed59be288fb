"""Directed reduction from 2P2N-3SAT with a feedback arc set of size three."""
from __future__ import annotations

from ..core import DIRECTED_VARIANTS, LabelClass
from ..exact import topological_order
from .base import Builder, GeneratedInstance
from .cnf import CnfError, CnfFormula

FEEDBACK_ARCS = (("w*", "v*"), ("T", "T'"), ("vL'", "vS"))


def _lit(x: int, neg: bool, suffix: str = "") -> str:
    return f"{'~' if neg else ''}x{x}{suffix}"


def gen_sat_directed(phi: CnfFormula, assignment: dict[int, bool] | None = None) -> GeneratedInstance:
    phi.require_2p2n()
    if assignment is not None and not phi.satisfied_by(assignment):
        raise CnfError("assignment does not satisfy the formula")
    B = Builder(directed=True)
    lab: dict[tuple[str, str], int] = {}
    for x in range(1, phi.nvars + 1):
        pos, neg = _lit(x, False), _lit(x, True)
        chain = ("v*", pos, pos + "'", neg, neg + "'", "w*")
        for a, b in zip(chain, chain[1:]):
            B.arc(a, b)
        lab[("v*", pos)] = 7
        lab[(neg + "'", "w*")] = 9
        for l in (pos, neg):
            a, b, l2 = f"a[{l}]", f"b[{l}]", l + "'"
            for arc, t in (((l, a), 1), ((a, "T"), 14), ((l, b), 3), ((b, l2), 15), ((l, "T"), None),
                           ((l2, "T"), 14), ((l2, "vL'"), 5), (("vL", l), 11)):
                B.arc(*arc)
                if t is not None:
                    lab[arc] = t
        if assignment is not None:
            if assignment[x]:
                lab[(pos, pos + "'")] = 6
                lab[(pos + "'", neg)] = 5
            else:
                lab[(pos + "'", neg)] = 11
                lab[(neg, neg + "'")] = 10
    for i, clause in enumerate(phi.clauses, start=1):
        s = f"s{i}"
        for lit in clause:
            l = _lit(abs(lit), lit < 0)
            B.arc(s, l)
            B.arc(s, l + "'")
            B.arc(s, f"b[{l}]")
            lab[(s, l)] = 2
        B.arc(s, "T")
        B.arc("vS", s)
        lab[("vS", s)] = 3
    for arc, t in ((("w*", "v*"), 8), (("T", "T'"), 13), (("T'", "vS"), 12), (("T'", "vL"), 12),
                   (("vL'", "vS"), 4)):
        B.arc(*arc)
        lab[arc] = t
    D = B.digraph()
    fas = [(B.pos[a], B.pos[b]) for a, b in FEEDBACK_ARCS]
    rest = type(D)(D.n, D.arcs - set(fas))
    out = GeneratedInstance(D, B.names, certificates={
        "feedback_arc_set": fas,
        "feedback_arc_set_valid": topological_order(rest) is not None,
    })
    if assignment is not None:
        for (a, b), t in lab.items():
            B.label(a, b, [t])
        out.witness = B.labeling()
        out.variants = tuple(v for v in DIRECTED_VARIANTS
                             if v.label_class in (LabelClass.PROPER, LabelClass.HAPPY) or not v.strict)
        out.certify()
    return out
