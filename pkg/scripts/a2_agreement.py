"""How often the inflated A2 count matches the oracle, per density and sigma.

    python scripts/a2_agreement.py --n 12 --k 3 --delta 2 4 --seeds 50

Agreement is reported, not thresholded; at small n it is expected to be low.
"""
import argparse

import numpy as np

from monocount.generate import GeneratorConfig, random_formula
from monocount.inflation import InflationError, count_a2
from monocount.oracle import brute_force_count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--delta", type=float, nargs="+", default=[2, 4])
    ap.add_argument("--sigma", type=int, nargs="+", default=[1, 2, 4])
    ap.add_argument("--seeds", type=int, default=50)
    args = ap.parse_args()

    print("delta\t" + "\t".join(f"sigma={s}" for s in args.sigma))
    for delta in args.delta:
        m = round(delta * args.n)
        corpus = [random_formula(GeneratorConfig(args.n, m, args.k, s)) for s in range(args.seeds)]
        truth = [brute_force_count(f) for f in corpus]
        cells = []
        for sigma in args.sigma:
            hits = failed = 0
            for seed, (f, t) in enumerate(zip(corpus, truth)):
                try:
                    hits += count_a2(f, sigma, np.random.default_rng(seed)).model_count == t
                except InflationError:
                    failed += 1
            cells.append(f"{hits}/{args.seeds}" + (f" ({failed} infeasible)" if failed else ""))
        print(f"{delta:g}\t" + "\t".join(cells))


if __name__ == "__main__":
    main()
