"""Book family: the spine edge needs a label count linear in n."""
from __future__ import annotations

from ..core import ANY_STRICT, solid_pairs
from .base import Builder, GeneratedInstance


def _inner(i: int, lower: bool) -> str:
    return f"u{i}'" if lower else f"u{i}"


def gen_book(L: int) -> GeneratedInstance:
    """Pages 1..L around the spine u0-u0'; pages 1,2 lack the lower side, L-1,L the upper."""
    if L < 5:
        raise ValueError("the book family needs at least 5 pages")
    B = Builder()
    B.solid("u0", "u0'")
    B.label("u0", "u0'", range(2, L))
    inner: list[tuple[int, bool]] = []
    for i in range(1, L + 1):
        upper, lower = i <= L - 2, i >= 3
        if upper:
            for a, b in (("u0", f"u{i}"), (f"u{i}", f"v{i}")):
                B.solid(a, b)
                B.label(a, b, [i])
            inner.append((i, False))
        if lower:
            for a, b in (("u0'", f"u{i}'"), (f"u{i}'", f"v{i}'")):
                B.solid(a, b)
                B.label(a, b, [i])
            inner.append((i, True))
        if upper and lower:
            B.solid(f"v{i}", f"v{i}'")
            B.label(f"v{i}", f"v{i}'", [i])
            # diagonals stay unlabeled; the spine realizes them
            B.solid("u0", f"u{i}'")
            B.solid("u0'", f"u{i}")
        elif upper:
            B.arc(f"u{i}", "u0'")
        else:
            B.arc("u0", f"u{i}'")
    for i, si in inner:
        for j, sj in inner:
            if (si == sj and i < j) or (si != sj and i + 1 < j):
                B.arc(_inner(i, si), _inner(j, sj))
    D = B.digraph()
    inst = GeneratedInstance(D, B.names, B.labeling(), (ANY_STRICT,), {
        "pages": L,
        "n": D.n,
        "solid_edges": len(solid_pairs(D)),
        "spine": (B.pos["u0"], B.pos["u0'"]),
        "feedback_vertex_set": [B.pos["u0"], B.pos["u0'"]],
    })
    inst.certify()
    return inst
