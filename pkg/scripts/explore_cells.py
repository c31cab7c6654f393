#!/usr/bin/env python3
"""Cell explorer: build a ball, print its two-sided cells and a-values.

Examples:
    python scripts/explore_cells.py --family dihedral --radius 14
    python scripts/explore_cells.py --family b2 --radius 12 --gamma
"""

import argparse
import sys
import time

from heckequot.coxeter import extended_affine_b2, extended_affine_pgl, infinite_dihedral
from heckequot.hecke import HeckeBall

FAMILIES = {
    "dihedral": infinite_dihedral,
    "b2": extended_affine_b2,
    "pgl3": lambda: extended_affine_pgl(3),
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=sorted(FAMILIES), default="dihedral")
    ap.add_argument("--radius", type=int, default=10)
    ap.add_argument("--margin", type=int, default=3)
    ap.add_argument("--gamma", action="store_true",
                    help="also dump the certified structure-constant table")
    args = ap.parse_args(argv)

    t0 = time.monotonic()
    hb = HeckeBall(FAMILIES[args.family](), args.radius, margin=args.margin)
    cp = hb.cell_partition()
    built = time.monotonic() - t0

    print(f"family={hb.pres.family} radius={args.radius} margin={args.margin}")
    print(f"ball={len(hb.ball)} wprime={len(hb.wp)} built in {built:.2f}s")
    print()
    print(f"{'cell':>4}  {'size':>5}  {'certified':>9}  {'a':>4}  note")
    for i, cell in enumerate(cp.two_sided):
        a = cell.a_value if cell.a_value is not None else "?"
        note = "fully certified" if cell.fully_certified else ""
        if not cell.certified_elements:
            note = "uncertified at this radius"
        print(f"{i:>4}  {len(cell):>5}  {len(cell.certified_elements):>9}  {a:>4}  {note}")
    print()
    print(f"left cells: {sorted(len(c) for c in cp.left)}")
    print(f"order pairs (i <= j): {sorted(cp.lr_order_pairs)}")
    print()
    print("distinguished involutions (element, sign):")
    for d, nd in hb.distinguished_involutions():
        print(f"  {d.key_str():>12}  {nd:+d}")

    for check in hb.check_properties():
        flag = "ok " if check.passed else "FAIL"
        print(f"property {check.name}: {flag} ({check.checked} instances)")

    if args.gamma:
        print()
        for line in hb.gamma_lines():
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
