"""Shared plumbing for instance generators."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..core import Digraph, Labeling, Variant, check_realization
from ..solid import has_triangle, solid_graph


@dataclass
class GeneratedInstance:
    D: Digraph
    names: list[str]
    witness: Labeling | None = None
    variants: tuple[Variant, ...] = ()
    certificates: dict = field(default_factory=dict)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def certify(self) -> None:
        """Raise if the attached witness fails any claimed variant."""
        if self.witness is None:
            return
        for var in self.variants:
            chk = check_realization(self.D, self.witness, var)
            if not chk:
                raise AssertionError(f"generated witness fails {var}: {chk.mismatch}")


class Builder:
    """Collects named vertices, solid edges, arcs and labels."""

    def __init__(self, directed: bool = False) -> None:
        self.directed = directed
        self.names: list[str] = []
        self.pos: dict[str, int] = {}
        self.arcs: set[tuple[int, int]] = set()
        self.labels: dict[tuple[str, str], tuple[int, ...]] = {}

    def vertex(self, name: str) -> int:
        if name not in self.pos:
            self.pos[name] = len(self.names)
            self.names.append(name)
        return self.pos[name]

    def arc(self, a: str, b: str) -> None:
        self.arcs.add((self.vertex(a), self.vertex(b)))

    def solid(self, a: str, b: str) -> None:
        self.arc(a, b)
        self.arc(b, a)

    def label(self, a: str, b: str, labels: Iterable[int]) -> None:
        self.labels[(a, b)] = tuple(labels)

    def digraph(self) -> Digraph:
        return Digraph(len(self.names), frozenset(self.arcs))

    def labeling(self) -> Labeling:
        lab = Labeling(len(self.names), directed=self.directed)
        for (a, b), ls in self.labels.items():
            u, v = self.pos[a], self.pos[b]
            if not (self.directed or ((u, v) in self.arcs and (v, u) in self.arcs)):
                raise ValueError(f"label on non-solid pair {a},{b}")
            lab.set(u, v, ls)
        return lab


def degree_certificates(D: Digraph) -> dict:
    G = solid_graph(D)
    return {
        "max_solid_degree": max((G.degree(v) for v in range(D.n)), default=0),
        "max_total_degree": max((bin(D.out_mask[v] | D.in_mask[v]).count("1") for v in range(D.n)),
                                default=0),
        "triangle_free": not has_triangle(G),
    }
