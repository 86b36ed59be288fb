"""Command-line front end. Exit codes: 0 YES/ok, 1 NO/mismatch, 2 UNKNOWN, 3 error."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import gen
from .core import ANY_STRICT, Digraph, Variant, Verdict, check_realization, reachability
from .decompose import CertifiedNo
from .exact import ArcBudgetExceeded
from .fes import GridBudgetExceeded, compute_Wstar, compute_decomposition
from .io import Instance, ParseError, emit_instance, emit_labeling, parse_instance, parse_labeling
from .solid import (bundled, classified_bridges, components, directed_prune_checks, separated,
                    solid_graph)
from .solve import METHODS, feedback_edge_number, solve

EXIT = {Verdict.YES: 0, Verdict.NO: 1, Verdict.UNKNOWN: 2}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(_read(path))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _variant(text: str | None, inst: Instance) -> Variant:
    if text is None:
        return Variant(inst.directed, ANY_STRICT.label_class, True)
    try:
        var = Variant.parse(text)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if var.directed != inst.directed:
        raise CliError(f"variant {var} does not match the instance header (directed={int(inst.directed)})")
    return var


# ---------------------------------------------------------------- commands

def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    var = _variant(args.variant, inst)
    try:
        res = solve(inst.D, var, args.method)
    except ArcBudgetExceeded as exc:
        raise CliError(f"ArcBudgetExceeded: {exc}") from None
    except GridBudgetExceeded as exc:
        raise CliError(f"GridBudgetExceeded: {exc}") from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    print(res.verdict.value)
    if res.reason:
        _err(f"{res.method}: {res.reason}")
    if res.yes and args.out:
        Path(args.out).write_text(emit_labeling(res.labeling))
    elif res.yes:
        sys.stdout.write(emit_labeling(res.labeling))
    return EXIT[res.verdict]


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    var = _variant(args.variant, inst)
    try:
        lab = parse_labeling(_read(args.labeling), inst.D.n)
    except ParseError as exc:
        raise CliError(f"{args.labeling}: {exc}") from None
    chk = check_realization(inst.D, lab, var)
    if chk:
        print("OK")
        return 0
    print(f"MISMATCH {chk.mismatch}")
    return 1


def cmd_reach(args) -> int:
    try:
        lab = parse_labeling(_read(args.temporal))
    except ParseError as exc:
        raise CliError(f"{args.temporal}: {exc}") from None
    R = reachability(lab, strict=not args.non_strict)
    sys.stdout.write(emit_instance(Instance(R, lab.directed)))
    return 0


def analyze_report(D: Digraph, directed: bool, variant: Variant) -> list[str]:
    lines = [f"vertices: {D.n}", f"arcs: {len(D.arcs)}"]
    if directed:
        facts = directed_prune_checks(D)
        lines.append(f"non-triangulated arcs (must be labeled): {len(facts.must_label)}")
        lines.append(f"induced directed cycles (<= 6): {len(facts.unlabeled_cycles)}")
        if facts.certified_no:
            lines.append(f"certified NO for non-trivial variants: {facts.reason}")
        return lines
    G = solid_graph(D)
    lines.append(f"solid edges: {len(G.edges)}")
    lines.append(f"dashed arcs: {sum(1 for u, v in D.arcs if not D.has(v, u))}")
    bridges = classified_bridges(D, G)
    special = [b for b in bridges if b.special]
    lines.append(f"bridges: {len(bridges)} ({len(special)} special)")
    lines.append(f"special bridges: {len(special)}"
                 + "".join(f" {{{b.edge[0]},{b.edge[1]}}}" for b in special))
    for b in bridges:
        lines.append(f"  bridge {{{b.edge[0]},{b.edge[1]}}} {b.kind.value}")
    kinds = {b.edge: b.kind for b in bridges}
    bun, sep = [], []
    for c in range(D.n):
        nb = [w for w in sorted(G.adj[c]) if (min(w, c), max(w, c)) in kinds]
        for i, u in enumerate(nb):
            for v in nb[i + 1:]:
                if bundled(D, c, u, v, G):
                    bun.append((u, c, v))
                if separated(D, c, u, v, variant, G, kinds):
                    sep.append((u, c, v))
    lines.append(f"bundled pairs: {len(bun)}" + "".join(f" {{{u},{c}}}{{{c},{v}}}" for u, c, v in bun))
    lines.append(f"separated pairs ({variant}): {len(sep)}"
                 + "".join(f" {{{u},{c}}}{{{c},{v}}}" for u, c, v in sep))
    if special and not variant.is_any_strict:
        b = special[0]
        lines.append(f"certified NO under {variant} (special edge {{{b.edge[0]},{b.edge[1]}}})")
    conflicts = [(u, c, v) for u, c, v in bun if (u, c, v) in sep]
    if conflicts:
        u, c, v = conflicts[0]
        lines.append(f"certified NO under {variant} (bundled and separated pair {{{u},{c}}}{{{c},{v}}})")
    lines.insert(0, f"summary: fes={feedback_edge_number(D)}, {len(special)} special")
    lines.append(f"fes: {feedback_edge_number(D)}")
    if len(components(G)) == 1 and D.n > 1:
        dec = compute_decomposition(D)
        if isinstance(dec, CertifiedNo):
            lines.append(f"decomposition: certified NO ({dec.reason})")
        else:
            lines.append(f"core vertices: {len(dec.core)}")
            lines.append(f"X*: {len(dec.Xstar)}")
            lines.append(f"X*-connectors: {len(dec.connectors)} "
                         f"({sum(1 for P in dec.connectors if not P.trivial)} non-trivial)")
            W = compute_Wstar(D, dec, variant) if variant.is_any_strict else None
            if isinstance(W, CertifiedNo):
                lines.append(f"W*: certified NO ({W.reason})")
            elif W is not None:
                lines.append(f"W*: {len(W)}")
                lines.append(f"W*-connectors: {len(dec.w_connectors)}")
    return lines


def cmd_analyze(args) -> int:
    inst = _load_instance(args.instance)
    var = _variant(args.variant, inst)
    for line in analyze_report(inst.D, inst.directed, var):
        print(line)
    return 0


def _write_generated(g: gen.GeneratedInstance, prefix: str, directed: bool) -> None:
    Path(prefix + ".rgr").write_text(emit_instance(Instance(g.D, directed, dict(enumerate(g.names)))))
    if g.witness is not None:
        Path(prefix + ".labeling.json").write_text(emit_labeling(g.witness))
    cert = {k: v for k, v in g.certificates.items()}
    cert["witness_variants"] = [str(v) for v in g.variants]
    Path(prefix + ".cert.json").write_text(json.dumps(cert, indent=1, default=list) + "\n")


def cmd_gen(args) -> int:
    try:
        if args.family == "book":
            g, directed = gen.gen_book(args.pages), False
        elif args.family in ("sat3", "dsat"):
            phi = gen.parse_dimacs(_read(args.file))
            assignment = gen.parse_assignment(_read(args.assignment), phi.nvars) if args.assignment else None
            fn = gen.gen_sat_trianglefree if args.family == "sat3" else gen.gen_sat_directed
            g, directed = fn(phi, assignment), args.family == "dsat"
        else:
            sc = gen.SetCoverInstance.from_json(_read(args.file))
            cover = None
            if args.cover:
                try:
                    cover = [int(x) for x in json.loads(_read(args.cover))]
                except (ValueError, TypeError):
                    raise CliError("cover file must be a JSON list of set indices") from None
            g, directed = gen.gen_setcover(sc, cover), False
    except (ValueError, gen.CnfError, gen.SetCoverError) as exc:
        raise CliError(str(exc)) from None
    _write_generated(g, args.out, directed)
    print(f"n={g.D.n} arcs={len(g.D.arcs)} witness={'yes' if g.witness is not None else 'no'}")
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rgr", description="Reachability graph realizability tools")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide realizability and emit a witness")
    s.add_argument("instance")
    s.add_argument("--variant")
    s.add_argument("--method", choices=METHODS, default="auto")
    s.add_argument("--out")
    s.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="verify a labeling against an instance")
    c.add_argument("instance")
    c.add_argument("labeling")
    c.add_argument("--variant")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("reach", help="reachability graph of a temporal graph")
    r.add_argument("temporal")
    mode = r.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true")
    mode.add_argument("--non-strict", action="store_true")
    r.set_defaults(func=cmd_reach)

    a = sub.add_parser("analyze", help="structural report")
    a.add_argument("instance")
    a.add_argument("--variant")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("gen", help="generate reduction instances")
    gs = g.add_subparsers(dest="family", required=True, parser_class=_Parser)
    b = gs.add_parser("book")
    b.add_argument("--pages", type=int, required=True)
    for fam in ("sat3", "dsat"):
        f = gs.add_parser(fam)
        f.add_argument("file")
        f.add_argument("--assignment")
    sc = gs.add_parser("setcover")
    sc.add_argument("file")
    sc.add_argument("--cover")
    for sp in gs.choices.values():
        sp.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _err(f"error: {exc}")
        return 3
    except AssertionError as exc:
        _err(f"BUG: internal self-check failed: {exc}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
