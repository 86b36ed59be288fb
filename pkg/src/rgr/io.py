"""Text instance files and JSON labeling files."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import Digraph, Labeling


class ParseError(ValueError):
    pass


@dataclass
class Instance:
    D: Digraph
    directed: bool = False
    names: dict[int, str] = field(default_factory=dict)


def parse_instance(text: str) -> Instance:
    """Header "RGR n directed", then "u v" arc lines; "@name v label" lines are optional."""
    header = None
    arcs: dict[tuple[int, int], int] = {}
    names: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3 or parts[0] != "RGR":
                raise ParseError(f"line {lineno}: expected header 'RGR <n> <0|1>'")
            try:
                n, flag = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"line {lineno}: header fields must be integers") from None
            if n < 0 or flag not in (0, 1):
                raise ParseError(f"line {lineno}: bad header values")
            header = (n, bool(flag))
            continue
        n = header[0]
        if parts[0] == "@name":
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: expected '@name <v> <label>'")
            v = _vertex(parts[1], n, lineno)
            names[v] = parts[2]
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        u, v = _vertex(parts[0], n, lineno), _vertex(parts[1], n, lineno)
        if u == v:
            raise ParseError(f"line {lineno}: self-loop at {u}")
        if (u, v) in arcs:
            raise ParseError(f"line {lineno}: duplicate arc ({u},{v}), first on line {arcs[(u, v)]}")
        arcs[(u, v)] = lineno
    if header is None:
        raise ParseError("empty instance file")
    return Instance(Digraph(header[0], frozenset(arcs)), header[1], names)


def _vertex(tok: str, n: int, lineno: int) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: vertex {tok!r} is not an integer") from None
    if not 0 <= v < n:
        raise ParseError(f"line {lineno}: vertex {v} out of range 0..{n - 1}")
    return v


def emit_instance(inst: Instance) -> str:
    lines = [f"RGR {inst.D.n} {int(inst.directed)}"]
    lines += [f"@name {v} {inst.names[v]}" for v in sorted(inst.names)]
    lines += [f"{u} {v}" for u, v in sorted(inst.D.arcs)]
    return "\n".join(lines) + "\n"


def labeling_to_json(lab: Labeling) -> dict:
    return {"directed": lab.directed,
            "edges": [{"u": u, "v": v, "labels": list(ls)} for (u, v), ls in lab.items()]}


def emit_labeling(lab: Labeling) -> str:
    return json.dumps(labeling_to_json(lab), indent=1) + "\n"


def parse_labeling(text: str, n: int | None = None) -> Labeling:
    """Parse a labeling file; n defaults to an "n" field or the largest vertex + 1."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"labeling JSON: {exc}") from None
    if not isinstance(data, dict) or "edges" not in data:
        raise ParseError("labeling JSON needs an 'edges' list")
    directed = bool(data.get("directed", False))
    edges = data["edges"]
    if n is not None and data.get("n", n) != n:
        raise ParseError(f"labeling is for n={data['n']}, instance has n={n}")
    if n is None:
        n = data.get("n")
    if n is None:
        n = 1 + max((max(e["u"], e["v"]) for e in edges), default=-1)
    lab = Labeling(n, directed=directed)
    for k, e in enumerate(edges):
        try:
            u, v, ls = int(e["u"]), int(e["v"]), [int(t) for t in e["labels"]]
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"edge entry {k}: needs integer u, v and a labels list") from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParseError(f"edge entry {k}: ({u},{v}) invalid for n={n}")
        if lab.get(u, v):
            raise ParseError(f"edge entry {k}: ({u},{v}) listed twice")
        if any(t < 1 for t in ls):
            raise ParseError(f"edge entry {k}: labels must be positive")
        lab.set(u, v, ls)
    return lab
