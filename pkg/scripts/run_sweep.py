"""Run a bench sweep, write the rows, and print fitted growth slopes.

    python scripts/run_sweep.py configs/sweep_small.json --out sweep.csv

Slopes are least-squares fits of log2(mean nodes) against n for each
(k, delta, sigma) group.  They are descriptive only.
"""
import argparse
import statistics
from collections import defaultdict

from monocount.bench import SweepConfig, fit_exponent, rows_to_csv, rows_to_json, run_sweep

COLUMNS = ("nodesExhaustive", "nodesPruned", "nodesA1")


def slopes(rows):
    groups = defaultdict(lambda: defaultdict(list))
    for r in rows:
        groups[(r.k, r.delta, r.sigma)][r.n].append(r)
    out = []
    for key in sorted(groups):
        by_n = groups[key]
        ns = sorted(by_n)
        fits = {}
        for col in COLUMNS:
            means = [statistics.fmean(v) if (v := [getattr(r, col) for r in by_n[n] if getattr(r, col)]) else 0
                     for n in ns]
            fits[col] = fit_exponent(ns, means)
        out.append((key, fits))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--out", help="CSV or JSON path (by extension); omitted means no file")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    with open(args.config, encoding="utf-8") as fh:
        cfg = SweepConfig.from_json(fh.read())
    rows = run_sweep(cfg, workers=args.workers)
    if args.out:
        text = rows_to_json(rows) if args.out.endswith(".json") else rows_to_csv(rows)
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)

    agree = [r.countAgrees for r in rows if r.countAgrees is not None]
    print(f"{len(rows)} cells; exact engines agree with the oracle on {sum(agree)}/{len(agree)}")
    print("k\tdelta\tsigma\t" + "\t".join(f"slope({c})" for c in COLUMNS))
    for (k, delta, sigma), fits in slopes(rows):
        print(f"{k}\t{delta:g}\t{sigma}\t" + "\t".join(f"{fits[c]:.3f}" for c in COLUMNS))


if __name__ == "__main__":
    main()
