"""Rewrite the CLI golden files under tests/golden/ from the current implementation."""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from instances import I3  # noqa: E402
from rgr.cli import analyze_report  # noqa: E402
from rgr.core import ANY_STRICT, Labeling, reachability  # noqa: E402
from rgr.io import Instance, emit_instance  # noqa: E402

GOLDEN = ROOT / "tests" / "golden"
REACH = [
    ("k2", {(0, 1): [1]}, True),
    ("path_strict", {(0, 1): [1], (1, 2): [1]}, True),
    ("path_nonstrict", {(0, 1): [1], (1, 2): [1]}, False),
]


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    for name, labels, strict in REACH:
        n = 1 + max(max(e) for e in labels)
        text = emit_instance(Instance(reachability(Labeling(n, labels), strict), False))
        (GOLDEN / f"reach_{name}.rgr").write_text(text)
    (GOLDEN / "analyze_I3.txt").write_text("\n".join(analyze_report(I3, False, ANY_STRICT)) + "\n")
    print(f"wrote goldens to {GOLDEN}")


if __name__ == "__main__":
    main()
