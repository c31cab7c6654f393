#!/usr/bin/env python3
"""Sweep extended-quotient censuses across the built-in torus actions.

Prints one census per action, then the per-partition component counts for
the permutation families up to --max-n, so growth patterns are easy to
eyeball next to the partition numbers.
"""

import argparse
import sys

from heckequot.duality import bernstein_point_gl, partitions
from heckequot.extquot import (
    census,
    extended_quotient,
    inversion_on_gm,
    sl_dual_torus,
    so5_weyl_on_torus,
    symmetric_on_torus,
)


def show(label: str, action) -> None:
    rows = census(extended_quotient(action))
    total = sum(n for _, _, n in rows)
    body = ", ".join(f"{n} x {desc}" for _, desc, n in rows)
    print(f"{label:>14}: {total:>3} components  [{body}]")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args(argv)

    show("Gm/inv", inversion_on_gm())
    show("W(B2) torus", so5_weyl_on_torus())
    for n in range(2, args.max_n + 1):
        show(f"S{n} torus", symmetric_on_torus(n))
    for n in range(2, args.max_n + 1):
        show(f"SL({n}) dual", sl_dual_torus(n))

    print()
    print("unramified point censuses, one block of each size:")
    for e in range(1, args.max_n + 1):
        out = bernstein_point_gl((e,))
        names = ", ".join(str(c) for c in out["census"])
        print(f"  block {e}: count={out['count']:>2} (p({e})={len(partitions(e))})  [{names}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
