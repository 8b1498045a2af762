"""Run every simulation-vs-analytic verification battery at full scale.

Writes one JSON report per battery into the output directory and exits
nonzero if any battery fails.  Reduced replica counts make a quick smoke
run; the defaults match the shipped acceptance scale.

    python3 scripts/run_batteries.py --out results/ --seed 0
    python3 scripts/run_batteries.py --out smoke/ --scale 0.05
"""

import argparse
from pathlib import Path

from condpp.io import write_report
from condpp.verify import verify_delta_bounds, verify_p_survival, verify_stein

DELTA_SETTINGS = [(5.0, 1), (10.0, 2), (1.0, 1)]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True, help="directory for report JSON files")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scale", type=float, default=1.0,
                    help="replica multiplier; 0.05 gives a fast smoke run")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def scaled(n, floor):
        return max(floor, int(round(n * args.scale)))

    all_ok = True

    report = verify_p_survival(replicas=scaled(100_000, 1000), seed=args.seed)
    write_report(out / "p_survival.json", report)
    print(f"p-survival: {'pass' if report['passed'] else 'FAIL'} "
          f"({len(report['rows'])} cells)")
    all_ok &= report["passed"]

    report = verify_stein(replicas=scaled(20_000, 500), seed=args.seed)
    write_report(out / "stein.json", report)
    print(f"stein: {'pass' if report['passed'] else 'FAIL'} "
          f"({len(report['rows'])} sizes)")
    all_ok &= report["passed"]

    for lam, m in DELTA_SETTINGS:
        report = verify_delta_bounds(
            lam=lam, m=m, replicas=scaled(1500, 100), seed=args.seed,
            workers=args.threads,
        )
        write_report(out / f"delta_bounds_lam{lam:g}_m{m}.json", report)
        print(f"delta-bounds (lam={lam:g}, m={m}): "
              f"{'pass' if report['passed'] else 'FAIL'} ({len(report['rows'])} rows)")
        all_ok &= report["passed"]

    return 0 if all_ok else 2


if __name__ == "__main__":
    raise SystemExit(main())
