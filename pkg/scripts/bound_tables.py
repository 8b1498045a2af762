"""Tabulate the closed-form difference bounds over a parameter sweep.

Produces one row per (lambda, m) pair with the winning candidate for each
bound, plus optional size-dependent columns, as CSV on stdout or a file.

    python3 scripts/bound_tables.py --m 1 2 --lam-min 0.5 --lam-max 20 \
        --points 40 --xi-size 10 --out bounds.csv
"""

import argparse
import csv
import sys

import numpy as np

from condpp.bounds import compute_stein_bounds

FIELDS = [
    "lambda", "m", "supercritical", "k1", "k2",
    "first_diff", "first_diff_winner", "second_diff", "second_diff_winner",
    "first_diff_nonuniform", "second_diff_nonuniform",
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, nargs="+", default=[1, 2, 5])
    ap.add_argument("--lam-min", type=float, default=0.25)
    ap.add_argument("--lam-max", type=float, default=25.0)
    ap.add_argument("--points", type=int, default=50)
    ap.add_argument("--log-spacing", action="store_true")
    ap.add_argument("--xi-size", type=int, default=None,
                    help="add size-dependent bound columns at this |xi|")
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    if args.log_spacing:
        lams = np.geomspace(args.lam_min, args.lam_max, args.points)
    else:
        lams = np.linspace(args.lam_min, args.lam_max, args.points)

    rows = []
    for m in args.m:
        # size-dependent bounds are defined only for m >= 1
        size = None
        if args.xi_size is not None and m >= 1:
            size = max(args.xi_size, m)
        for lam in lams:
            b = compute_stein_bounds(float(lam), m, size)
            rows.append({
                "lambda": f"{lam:.6g}",
                "m": m,
                "supercritical": b.supercritical,
                "k1": repr(b.k1),
                "k2": repr(b.k2),
                "first_diff": repr(b.first_diff),
                "first_diff_winner": b.first_diff_winner,
                "second_diff": repr(b.second_diff),
                "second_diff_winner": b.second_diff_winner,
                "first_diff_nonuniform": "" if b.first_diff_nonuniform is None
                else repr(b.first_diff_nonuniform),
                "second_diff_nonuniform": "" if b.second_diff_nonuniform is None
                else repr(b.second_diff_nonuniform),
            })

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
