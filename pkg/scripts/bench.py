"""Time the solvers on generated families; prints one line per run."""
import argparse
import time

from rgr.core import ANY_STRICT, Variant
from rgr.fes import fes_solve
from rgr.gen import gen_book
from rgr.solve import solve


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pages", type=int, nargs="+", default=[5])
    ap.add_argument("--variant", default="AnyStrict")
    ap.add_argument("--grid-cap", type=int, default=10 ** 7)
    args = ap.parse_args()
    variant = Variant.parse(args.variant)
    for L in args.pages:
        D = gen_book(L).D
        for name, run in (("auto", lambda: solve(D, variant)),
                          ("fes", lambda: fes_solve(D, variant, grid_cap=args.grid_cap))):
            if name == "fes" and variant != ANY_STRICT:
                continue
            t0 = time.perf_counter()
            res = run()
            print(f"book L={L} n={D.n} {name}: {res.verdict.name} in {time.perf_counter() - t0:.2f}s "
                  f"({res.method})")


if __name__ == "__main__":
    main()
