"""Command-line entry point: ``monocount {count,generate,inflate,validate,bench}``.

Exit codes: 0 success, 1 bad input or unmet precondition, 2 internal
inconsistency (a tally outside [0, 2^n]), 3 exact engines disagree.
Timing goes to stderr so stdout is byte-for-byte reproducible.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import bench, counter, inflation, oracle
from .cnf import CnfError, Formula, parse_dimacs, write_dimacs
from .generate import GeneratorConfig, random_formula

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_DISAGREE = 0, 1, 2, 3
COUNT_MODES = ("exhaustive", "pruned", "a1", "a2", "oracle")


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    output: str = "-"
    mode: str = "pruned"
    sigma: int = 2
    seed: int | None = None
    output_format: str = "text"
    threads: int = 1

    def __post_init__(self):
        if self.sigma < 1:
            raise ValueError("--sigma must be >= 1")
        if self.mode == "a2" and self.seed is None:
            raise ValueError("mode a2 requires --seed")
        if self.threads < 1:
            raise ValueError("--threads must be >= 1")


class UsageError(Exception):
    pass


def _read(path: str) -> Formula:
    if path == "-":
        return parse_dimacs(sys.stdin)
    with open(path, encoding="ascii", newline="") as fh:
        return parse_dimacs(fh)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _err(msg: str) -> None:
    print(f"monocount: {msg}", file=sys.stderr)


def run_count(f: Formula, mode: str, sigma: int = 2, seed: int | None = None,
              threads: int = 1) -> counter.CountResult:
    if mode == "exhaustive":
        return counter.signed_count_exhaustive(f, threads)
    if mode == "pruned":
        return counter.signed_count_pruned(f, threads)
    if mode == "a1":
        return counter.count_random_a1(f, sigma, threads)
    if mode == "a2":
        return inflation.count_a2(f, sigma, np.random.default_rng(seed), threads)
    if mode == "oracle":
        return counter.CountResult(oracle.brute_force_count(f), "oracle", 0, 0, True)
    raise ValueError(f"unknown mode {mode!r}")


def _report(r: counter.CountResult, fmt: str) -> str:
    if fmt == "json":
        return r.to_json() + "\n"
    lines = []
    if not r.exact:
        lines.append("NOTE: probabilistic mode, count is exact only with high probability")
    lines += [
        f"modelCount: {r.model_count}",
        f"mode: {r.mode}",
        f"exact: {str(r.exact).lower()}",
        f"nodesVisited: {r.nodes_visited}",
        f"subtreesPruned: {r.subtrees_pruned}",
    ]
    return "\n".join(lines) + "\n"


def cmd_count(cfg: RunConfig) -> int:
    f = _read(cfg.input)
    start = time.perf_counter()
    r = run_count(f, cfg.mode, cfg.sigma, cfg.seed, cfg.threads)
    _write(cfg.output, _report(r, cfg.output_format))
    print(f"wall time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return EXIT_OK


def cmd_generate(args) -> int:
    f = random_formula(GeneratorConfig(args.n, args.m, args.k, args.seed))
    _write(args.out, write_dimacs(f))
    return EXIT_OK


def cmd_inflate(args) -> int:
    f = _read(args.input)
    f_prime, rec = inflation.inflate_formula(f, args.sigma, np.random.default_rng(args.seed))
    _write(args.out, write_dimacs(f_prime))
    if args.record:
        _write(args.record, rec.to_json() + "\n")
    return EXIT_OK


def _engine_counts(f: Formula, threads: int) -> dict[str, int]:
    """Model counts from every exact engine that is feasible for f."""
    out = {}
    if f.m <= 25:
        out["exhaustive"] = counter.signed_count_exhaustive(f, threads).model_count
    out["pruned"] = counter.signed_count_pruned(f, threads).model_count
    if f.num_vars <= oracle.MAX_ORACLE_VARS:
        out["oracle"] = oracle.brute_force_count(f)
    if f.m <= oracle.MAX_SIGNED_SUM_CLAUSES and f.num_vars <= 62:
        out["signed_sum"] = oracle.brute_force_signed_sum(f)
    return out


def cmd_validate(args) -> int:
    rows = []
    if args.input:
        formulas = [(path, _read(path)) for path in args.input]
    else:
        if args.n is None or args.m is None or args.k is None:
            raise UsageError("validate needs --in FILE or all of --n --m --k")
        formulas = [
            (f"seed={s}", random_formula(GeneratorConfig(args.n, args.m, args.k, s)))
            for s in range(args.seed, args.seed + args.seeds)
        ]
    agree = 0
    for name, f in formulas:
        counts = _engine_counts(f, args.threads)
        ok = len(set(counts.values())) == 1
        agree += ok
        rows.append((name, counts, ok))
    cross = True
    if args.input and len(formulas) > 1:
        cross = len({next(iter(c.values())) for _, c, _ in rows}) == 1
    if args.format == "json":
        payload = {
            "instances": [
                {"name": name, "counts": {k: str(v) for k, v in c.items()}, "agree": ok}
                for name, c, ok in rows
            ],
            "agreeing": agree,
            "total": len(rows),
            "crossFileAgree": cross,
        }
        text = json.dumps(payload, indent=1) + "\n"
    else:
        engines = ["exhaustive", "pruned", "oracle", "signed_sum"]
        lines = ["\t".join(["instance"] + engines + ["agree"])]
        for name, c, ok in rows:
            lines.append("\t".join([name] + [str(c.get(e, "-")) for e in engines] + ["yes" if ok else "NO"]))
        lines.append(f"agreement: {agree}/{len(rows)}")
        if args.input and len(formulas) > 1:
            lines.append(f"files agree: {'yes' if cross else 'NO'}")
        text = "\n".join(lines) + "\n"
    _write(args.out, text)
    return EXIT_OK if agree == len(rows) and cross else EXIT_DISAGREE


def cmd_bench(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        cfg = bench.SweepConfig.from_json(fh.read())
    rows = bench.run_sweep(cfg, workers=args.workers)
    text = bench.rows_to_json(rows) if args.format == "json" else bench.rows_to_csv(rows)
    _write(args.out, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monocount", description="Model counting over monotone sub-formulae.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    c = sub.add_parser("count", help="count models of a DIMACS file")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--mode", choices=COUNT_MODES, default="pruned")
    c.add_argument("--sigma", type=int, default=2)
    c.add_argument("--seed", type=int)
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out", default="-")

    g = sub.add_parser("generate", help="write a random k-CNF instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")

    i = sub.add_parser("inflate", help="model-preserving random inflation")
    i.add_argument("--in", dest="input", required=True)
    i.add_argument("--sigma", type=int, default=2)
    i.add_argument("--seed", type=int, required=True)
    i.add_argument("--out", default="-")
    i.add_argument("--record")

    v = sub.add_parser("validate", help="cross-check every exact engine")
    v.add_argument("--in", dest="input", action="append",
                   help="DIMACS file; repeat to also require equal counts across files")
    v.add_argument("--n", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--seeds", type=int, default=10)
    v.add_argument("--seed", type=int, default=0, help="first seed of the corpus")
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", default="-")

    b = sub.add_parser("bench", help="run a parameter sweep")
    b.add_argument("--config", required=True)
    b.add_argument("--out", default="-")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--workers", type=int, default=1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand == "count":
            cfg = RunConfig("count", args.input, args.out, args.mode, args.sigma,
                            args.seed, args.format, args.threads)
            return cmd_count(cfg)
        handler = {
            "generate": cmd_generate,
            "inflate": cmd_inflate,
            "validate": cmd_validate,
            "bench": cmd_bench,
        }[args.subcommand]
        if getattr(args, "sigma", 1) < 1:
            raise ValueError("--sigma must be >= 1")
        return handler(args)
    except counter.InconsistentTally as exc:
        _err(f"internal inconsistency: {exc}")
        return EXIT_INTERNAL
    except (CnfError, OSError, ValueError, UsageError) as exc:
        _err(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
