import json
import random
import shutil
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from rgr.cli import main
from rgr.core import ANY_STRICT, Digraph, Labeling, check_realization
from rgr.io import Instance, ParseError, emit_instance, emit_labeling, parse_instance, parse_labeling

from instances import I1, I3, cycle, random_labeling

GOLDEN = Path(__file__).parent / "golden"


def write_instance(path: Path, D: Digraph, directed: bool = False) -> Path:
    path.write_text(emit_instance(Instance(D, directed)))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- file formats

def test_parse_instance_with_comments_and_names():
    inst = parse_instance("# demo\nRGR 3 0  # header\n@name 0 a\n0 1\n1 0 # solid\n\n0 2\n")
    assert inst.D.arcs == {(0, 1), (1, 0), (0, 2)}
    assert inst.names == {0: "a"} and not inst.directed
    assert parse_instance(emit_instance(inst)) == inst


@pytest.mark.parametrize("text, where", [
    ("RGR 2 0\n0 0\n", "line 2"),
    ("RGR 2 0\n0 1\n0 1\n", "line 3"),
    ("RGR 2 0\n0 5\n", "line 2"),
    ("RGR two 0\n", "line 1"),
    ("", "empty"),
])
def test_parse_instance_errors(text, where):
    with pytest.raises(ParseError, match=where):
        parse_instance(text)


def test_labeling_round_trip_and_canonical_order():
    lab = Labeling(4, {(2, 1): [5, 3], (0, 3): [1]})
    text = emit_labeling(lab)
    data = json.loads(text)
    assert data["edges"][0] == {"u": 0, "v": 3, "labels": [1]}
    assert data["edges"][1] == {"u": 1, "v": 2, "labels": [3, 5]}
    assert parse_labeling(text, 4) == lab


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.booleans())
def test_round_trips(seed, directed):
    rng = random.Random(seed)
    lab = random_labeling(rng, 5, 6, 9, directed=directed, max_per_edge=3)
    assert parse_labeling(emit_labeling(lab), 5) == lab
    D = Digraph(5, frozenset(lab.entries))
    inst = Instance(D, directed, {v: f"v{v}" for v in range(5) if rng.random() < 0.5})
    assert parse_instance(emit_instance(inst)) == inst


def test_labeling_errors():
    with pytest.raises(ParseError):
        parse_labeling("{}")
    with pytest.raises(ParseError):
        parse_labeling('{"edges": [{"u": 0, "v": 9, "labels": [1]}]}', 3)
    with pytest.raises(ParseError):
        parse_labeling('{"n": 5, "edges": []}', 3)
    with pytest.raises(ParseError):
        parse_labeling('{"edges": [{"u": 0, "v": 1, "labels": [0]}]}', 3)


# ---------------------------------------------------------------- solve

def test_solve_yes_writes_certified_labeling(tmp_path, capsys):
    inst = write_instance(tmp_path / "i1.rgr", I1)
    out = tmp_path / "i1.json"
    code, stdout, _ = run(capsys, "solve", inst, "--variant", "AnyStrict", "--out", out)
    assert code == 0 and stdout.strip() == "YES"
    assert check_realization(I1, parse_labeling(out.read_text(), 3), ANY_STRICT).ok


def test_solve_no(tmp_path, capsys):
    inst = write_instance(tmp_path / "i1.rgr", I1)
    code, stdout, _ = run(capsys, "solve", inst, "--variant", "Proper")
    assert code == 1 and stdout.strip() == "NO"


@pytest.mark.parametrize("method", ["auto", "tree", "fes", "dp", "oracle"])
def test_solve_methods_agree(tmp_path, capsys, method):
    inst = write_instance(tmp_path / "i3.rgr", I3)
    code, stdout, _ = run(capsys, "solve", inst, "--method", method)
    assert code == 0 and stdout.startswith("YES")


def test_solve_dp_over_budget_is_error(tmp_path, capsys):
    D = Digraph(6, frozenset((u, v) for u in range(6) for v in range(6) if u != v))
    assert len(D.arcs) == 30
    inst = write_instance(tmp_path / "dense.rgr", D)
    code, _, err = run(capsys, "solve", inst, "--method", "dp")
    assert code == 3 and "ArcBudgetExceeded" in err


def test_solve_tree_method_on_cycle_is_error(tmp_path, capsys):
    inst = write_instance(tmp_path / "c4.rgr", cycle(4))
    code, _, err = run(capsys, "solve", inst, "--method", "tree")
    assert code == 3 and "error" in err


def test_solve_variant_direction_mismatch(tmp_path, capsys):
    inst = write_instance(tmp_path / "i1.rgr", I1)
    code, _, err = run(capsys, "solve", inst, "--variant", "DirHappy")
    assert code == 3 and "does not match" in err


def test_solve_directed_trivial(tmp_path, capsys):
    D = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    inst = write_instance(tmp_path / "c3.rgr", D, directed=True)
    assert run(capsys, "solve", inst)[0] == 0
    assert run(capsys, "solve", inst, "--variant", "DirProper")[0] == 1


def test_solve_parse_error_has_location(tmp_path, capsys):
    bad = tmp_path / "bad.rgr"
    bad.write_text("RGR 2 0\n0 1\n0 1\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == 3 and "line 3" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 3


# ---------------------------------------------------------------- check

def test_check_book_witness_and_tampering(tmp_path, capsys):
    prefix = tmp_path / "book"
    code, stdout, _ = run(capsys, "gen", "book", "--pages", 5, "--out", prefix)
    assert code == 0 and "n=14" in stdout
    inst, lab = Path(f"{prefix}.rgr"), Path(f"{prefix}.labeling.json")
    assert parse_instance(inst.read_text()).D.n == 14
    assert run(capsys, "check", inst, lab)[:2] == (0, "OK\n")
    data = json.loads(lab.read_text())
    cert = json.loads(Path(f"{prefix}.cert.json").read_text())
    su, sv = sorted(cert["spine"])
    for e in data["edges"]:
        if (e["u"], e["v"]) == (su, sv):
            e["labels"] = e["labels"][:-1]
    bad = tmp_path / "tampered.json"
    bad.write_text(json.dumps(data))
    code, stdout, _ = run(capsys, "check", inst, bad)
    assert code == 1 and stdout.startswith("MISMATCH") and "arc" in stdout


def test_check_wrong_dimension(tmp_path, capsys):
    inst = write_instance(tmp_path / "i1.rgr", I1)
    lab = tmp_path / "big.json"
    lab.write_text(emit_labeling(Labeling(5, {(3, 4): [1]})))
    assert run(capsys, "check", inst, lab)[0] == 3


# ---------------------------------------------------------------- reach

@pytest.mark.parametrize("name, labels, flag", [
    ("k2", {(0, 1): [1]}, "--strict"),
    ("path_strict", {(0, 1): [1], (1, 2): [1]}, "--strict"),
    ("path_nonstrict", {(0, 1): [1], (1, 2): [1]}, "--non-strict"),
])
def test_reach_golden(tmp_path, capsys, name, labels, flag):
    n = 1 + max(max(e) for e in labels)
    src = tmp_path / "t.json"
    src.write_text(emit_labeling(Labeling(n, labels)))
    code, stdout, _ = run(capsys, "reach", src, flag)
    assert code == 0
    assert stdout == (GOLDEN / f"reach_{name}.rgr").read_text()


# ---------------------------------------------------------------- analyze

def test_analyze_golden_I3(tmp_path, capsys):
    inst = write_instance(tmp_path / "i3.rgr", I3)
    code, stdout, _ = run(capsys, "analyze", inst)
    assert code == 0
    assert stdout == (GOLDEN / "analyze_I3.txt").read_text()
    assert "special bridges: 1 {1,2}" in stdout


def test_analyze_cycle(tmp_path, capsys):
    inst = write_instance(tmp_path / "c6.rgr", cycle(6))
    stdout = run(capsys, "analyze", inst)[1]
    assert stdout.splitlines()[0] == "summary: fes=1, 0 special"


def test_analyze_proper_special_edge(tmp_path, capsys):
    inst = write_instance(tmp_path / "i3.rgr", I3)
    stdout = run(capsys, "analyze", inst, "--variant", "Proper")[1]
    assert "certified NO under Proper (special edge {1,2})" in stdout


def test_analyze_directed(tmp_path, capsys):
    D = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
    inst = write_instance(tmp_path / "c3.rgr", D, directed=True)
    stdout = run(capsys, "analyze", inst)[1]
    assert "certified NO" in stdout


# ---------------------------------------------------------------- gen

def test_gen_sat3_with_assignment(tmp_path, capsys):
    cnf = tmp_path / "tiny.cnf"
    cnf.write_text("p cnf 2 4\n1 2 0\n1 2 0\n-1 -2 0\n-1 -2 0\n")
    a = tmp_path / "a.txt"
    a.write_text("1 -2\n")
    prefix = tmp_path / "s"
    assert run(capsys, "gen", "sat3", cnf, "--assignment", a, "--out", prefix)[0] == 0
    code, stdout, _ = run(capsys, "check", f"{prefix}.rgr", f"{prefix}.labeling.json")
    assert code == 0
    assert run(capsys, "check", f"{prefix}.rgr", f"{prefix}.labeling.json", "--variant", "SimpleStrict")[0] == 0


def test_gen_dsat(tmp_path, capsys):
    cnf = tmp_path / "tiny.cnf"
    cnf.write_text("p cnf 2 4\n1 2 0\n1 2 0\n-1 -2 0\n-1 -2 0\n")
    a = tmp_path / "a.txt"
    a.write_text("v 1 -2 0\n")
    prefix = tmp_path / "d"
    assert run(capsys, "gen", "dsat", cnf, "--assignment", a, "--out", prefix)[0] == 0
    code, _, _ = run(capsys, "check", f"{prefix}.rgr", f"{prefix}.labeling.json", "--variant", "DirHappy")
    assert code == 0
    cert = json.loads(Path(f"{prefix}.cert.json").read_text())
    assert cert["feedback_arc_set_valid"] is True


def test_gen_setcover(tmp_path, capsys):
    sc = tmp_path / "sc.json"
    sc.write_text(json.dumps({"universe": [1, 2, 3], "sets": [[1, 2], [3], [2, 3]], "k": 2}))
    cover = tmp_path / "cover.json"
    cover.write_text("[0, 1]")
    prefix = tmp_path / "c"
    assert run(capsys, "gen", "setcover", sc, "--cover", cover, "--out", prefix)[0] == 0
    assert run(capsys, "check", f"{prefix}.rgr", f"{prefix}.labeling.json")[0] == 0


def test_gen_setcover_invalid_k(tmp_path, capsys):
    sc = tmp_path / "sc.json"
    sc.write_text(json.dumps({"universe": [1], "sets": [[1]], "k": 3}))
    code, _, err = run(capsys, "gen", "setcover", sc, "--out", tmp_path / "x")
    assert code == 3 and "k=3" in err


def test_gen_non_2p2n_error(tmp_path, capsys):
    cnf = tmp_path / "bad.cnf"
    cnf.write_text("p cnf 1 1\n1 0\n")
    assert run(capsys, "gen", "sat3", cnf, "--out", tmp_path / "x")[0] == 3


# ---------------------------------------------------------------- entry point

@pytest.mark.skipif(shutil.which("rgr") is None, reason="console script not installed")
def test_console_script(tmp_path):
    inst = write_instance(tmp_path / "i1.rgr", I1)
    res = subprocess.run(["rgr", "solve", str(inst), "--variant", "Proper"], capture_output=True, text=True)
    assert res.returncode == 1 and res.stdout.strip() == "NO"


def test_module_entry(tmp_path):
    inst = write_instance(tmp_path / "i1.rgr", I1)
    res = subprocess.run([sys.executable, "-m", "rgr.cli", "solve", str(inst)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("YES")
