"""A1 disagreement rate against the brute-force oracle as sigma grows.

    python scripts/a1_error_rates.py --n 12 --k 3 --delta 8 --seeds 50
"""
import argparse

from monocount.counter import count_random_a1
from monocount.generate import GeneratorConfig, random_formula
from monocount.oracle import brute_force_count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--delta", type=float, default=8)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--sigma", type=int, nargs="+", default=[1, 2, 4])
    args = ap.parse_args()

    m = round(args.delta * args.n)
    corpus = [random_formula(GeneratorConfig(args.n, m, args.k, s)) for s in range(args.seeds)]
    truth = [brute_force_count(f) for f in corpus]
    print(f"n={args.n} k={args.k} m={m} seeds={args.seeds}")
    print("sigma\twrong\trate\tmean nodes")
    for sigma in args.sigma:
        results = [count_random_a1(f, sigma) for f in corpus]
        wrong = sum(r.model_count != t for r, t in zip(results, truth))
        nodes = sum(r.nodes_visited for r in results) / len(results)
        print(f"{sigma}\t{wrong}\t{wrong / len(corpus):.2f}\t{nodes:.0f}")


if __name__ == "__main__":
    main()
