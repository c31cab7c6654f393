#!/usr/bin/env python3
"""Run the census matchers for every family and print a verdict table.

Exit status mirrors the CLI convention: 0 when everything passes, 2 when
any matcher reports a discrepancy.
"""

import argparse
import sys

from heckequot.duality import match_conjecture


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--records", action="store_true", help="print per-cell records")
    args = ap.parse_args(argv)

    jobs = [("sl2", None), ("so5", None)]
    jobs += [("gl", n) for n in range(1, args.max_n + 1)]
    jobs += [("pgl", n) for n in range(2, args.max_n + 1)]

    worst = 0
    for family, n in jobs:
        rep = match_conjecture(family, n)
        label = family if n is None else f"{family}({n})"
        print(f"{label:>8}: {rep.verdict:<12} {rep.note}")
        if args.records:
            for r in rep.records:
                sides = ""
                if r.dual_side is not None and r.quotient_side is not None:
                    dual = ", ".join(str(d) for d in r.dual_side)
                    quot = ", ".join(str(d) for d in r.quotient_side)
                    sides = f" dual=[{dual}] quotient=[{quot}]"
                print(f"          {r.cell:<20} {r.verdict:<10}{sides}")
                if r.note:
                    print(f"          {'':<20} note: {r.note}")
        if rep.verdict == "DISCREPANCY":
            worst = 2
        elif rep.verdict != "PASS":
            worst = max(worst, 1)
    return worst


if __name__ == "__main__":
    sys.exit(main())
