"""Monte Carlo estimators and parameter sweeps for the pruning statistics.

The estimators draw real uniform clauses (a uniform k-subset of variables via
Floyd's algorithm, plus k fair sign bits), vectorised over numpy arrays.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .counter import (
    count_random_a1,
    critical_saturation,
    fruitless_probability_exact,
    signed_count_exhaustive,
    signed_count_pruned,
)
from .generate import GeneratorConfig, candidate_count, random_formula
from .oracle import brute_force_count

LOG2_E = math.log2(math.e)
MIN_TRIALS = 10_000
_BATCH = 1 << 18  # clauses drawn per numpy batch


def binomial_stderr(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / trials)


def _random_subsets(n: int, k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` uniform k-subsets of range(n), one per row (Floyd's algorithm)."""
    out = np.empty((size, k), dtype=np.int64)
    for col, j in enumerate(range(n - k, n)):
        t = rng.integers(0, j + 1, size=size)
        if col:
            seen = (out[:, :col] == t[:, None]).any(axis=1)
            t = np.where(seen, j, t)
        out[:, col] = t
    return out


def _fruitless_draws(n: int, k: int, nu: int, state_signs: np.ndarray, rng) -> np.ndarray:
    """Fruitless indicator for each of ``len(state_signs)`` random clauses.

    The sign state maps variables 0..nu-1; row r of ``state_signs`` holds the
    state signs used for clause r.
    """
    size = state_signs.shape[0]
    variables = _random_subsets(n, k, size, rng)
    signs = rng.integers(0, 2, size=(size, k), dtype=np.int8)
    inside = (variables < nu).all(axis=1)
    # variables outside the state are already excluded by ``inside``
    state_at = np.take_along_axis(state_signs, np.minimum(variables, nu - 1), axis=1)
    return inside & (state_at == signs).all(axis=1)


def estimate_fruitless_rate(n: int, k: int, nu: int, trials: int, rng: np.random.Generator) -> float:
    """Fraction of ``trials`` random width-k clauses fruitless for a fixed nu-variable state."""
    if not 0 <= nu <= n:
        raise ValueError(f"need 0 <= nu <= n, got nu={nu}, n={n}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if nu < k:
        return 0.0
    state = rng.integers(0, 2, size=nu, dtype=np.int8)
    hits = 0
    for lo in range(0, trials, _BATCH):
        size = min(_BATCH, trials - lo)
        hits += int(_fruitless_draws(n, k, nu, np.broadcast_to(state, (size, nu)), rng).sum())
    return hits / trials


def critical_nu(n: int, k: int) -> int:
    """Smallest variable count at or above the critical saturation."""
    return min(n, math.ceil(critical_saturation(n, k) * n))


def estimate_prune_rate(n: int, k: int, sigma: int, trials: int, rng: np.random.Generator) -> float:
    """Fraction of trials where sigma * n random clauses contain a fruitless one.

    Each trial fixes a fresh random sign state on ceil(s * n) variables, s being
    the critical saturation.
    """
    if trials < 1:
        raise ValueError("empty sample: trials must be positive")
    nu = critical_nu(n, k)
    if nu < k:
        raise ValueError(f"critical state has {nu} variables, fewer than k={k}")
    per_trial = sigma * n
    chunk = max(1, _BATCH // per_trial)
    hits = 0
    for lo in range(0, trials, chunk):
        t = min(chunk, trials - lo)
        states = rng.integers(0, 2, size=(t, nu), dtype=np.int8)
        draws = _fruitless_draws(n, k, nu, np.repeat(states, per_trial, axis=0), rng)
        hits += int(draws.reshape(t, per_trial).any(axis=1).sum())
    return hits / trials


def prune_lower_bound(n: int, sigma: int) -> float:
    """1 - n^(-sigma * log2 e)."""
    return max(0.0, 1.0 - n ** (-sigma * LOG2_E))


def expected_prune_rate(n: int, k: int, sigma: int) -> float:
    p = fruitless_probability_exact(n, k, critical_nu(n, k))
    return 1.0 - float((1 - p) ** (sigma * n))


def approx_fruitless(k: int, saturation: float) -> float:
    """Closed-form approximation 2^(-k (1 - log2 s))."""
    if saturation <= 0:
        return 0.0
    return 2.0 ** (-k * (1 - math.log2(saturation)))


def inner_exponent(k: int, sigma: int) -> float:
    return math.log2(sigma * k) / k + 1 / k - 1 / (sigma * k * k)


@dataclass
class BenchRow:
    n: int
    m: int
    k: int
    delta: float
    sigma: int
    seed: int
    nodesExhaustive: int | None = None
    nodesPruned: int | None = None
    nodesA1: int | None = None
    countAgrees: bool | None = None
    a1Agrees: bool | None = None
    predictedFruitless: float | None = None
    approxFruitless: float | None = None
    measuredFruitless: float | None = None
    predictedPruneLowerBound: float | None = None
    expectedPruneRate: float | None = None
    measuredPruneRate: float | None = None
    predictedInnerExponent: float | None = None


FIELDS = [f.name for f in fields(BenchRow)]
_REALS = {
    "delta", "predictedFruitless", "approxFruitless", "measuredFruitless",
    "predictedPruneLowerBound", "expectedPruneRate", "measuredPruneRate",
    "predictedInnerExponent",
}


@dataclass
class Cell:
    n: int
    m: int
    k: int
    sigma: int
    seed: int


@dataclass
class SweepConfig:
    """Grid of cells plus feasibility limits.

    ``cells`` lists explicit cells; otherwise the grid is the product of
    n x k x (m or delta) x sigma x seeds, in that order.
    """

    n: list[int] = field(default_factory=list)
    k: list[int] = field(default_factory=list)
    delta: list[float] = field(default_factory=list)
    m: list[int] = field(default_factory=list)
    sigma: list[int] = field(default_factory=lambda: [2])
    seeds: list[int] = field(default_factory=lambda: [0])
    cells: list[Cell] = field(default_factory=list)
    trials: int = MIN_TRIALS
    oracle_max_n: int = 20
    exhaustive_max_m: int = 22
    count_max_n: int = 64
    count_max_m: int = 200

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        keys = {
            "n": "n", "k": "k", "delta": "delta", "m": "m", "sigma": "sigma",
            "seeds": "seeds", "trials": "trials", "oracleMaxN": "oracle_max_n",
            "exhaustiveMaxM": "exhaustive_max_m", "countMaxN": "count_max_n",
            "countMaxM": "count_max_m",
        }
        unknown = set(d) - set(keys) - {"cells"}
        if unknown:
            raise ValueError(f"unknown sweep keys {sorted(unknown)}")
        kw = {keys[k]: v for k, v in d.items() if k in keys}
        if isinstance(kw.get("seeds"), int):
            kw["seeds"] = list(range(kw["seeds"]))
        kw["cells"] = [Cell(**c) for c in d.get("cells", [])]
        return cls(**kw)

    @classmethod
    def from_json(cls, text: str) -> "SweepConfig":
        return cls.from_dict(json.loads(text))

    def grid(self) -> list[Cell]:
        if self.cells:
            return list(self.cells)
        if self.m and self.delta:
            raise ValueError("give either m or delta, not both")
        out = []
        for n, k in itertools.product(self.n, self.k):
            sizes = self.m if self.m else [round(d * n) for d in self.delta]
            for m, sigma, seed in itertools.product(sizes, self.sigma, self.seeds):
                out.append(Cell(n, m, k, sigma, seed))
        return out


def run_cell(cell: Cell, cfg: SweepConfig) -> BenchRow:
    n, m, k, sigma, seed = cell.n, cell.m, cell.k, cell.sigma, cell.seed
    row = BenchRow(n, m, k, m / n, sigma, seed)
    row.predictedInnerExponent = inner_exponent(k, sigma)
    row.predictedPruneLowerBound = prune_lower_bound(n, sigma)
    if n >= 2 and 1 <= k <= n:
        nu = critical_nu(n, k)
        row.predictedFruitless = float(fruitless_probability_exact(n, k, nu))
        row.approxFruitless = approx_fruitless(k, nu / n)
        row.expectedPruneRate = expected_prune_rate(n, k, sigma)
        row.measuredFruitless = estimate_fruitless_rate(
            n, k, nu, cfg.trials, np.random.default_rng([seed, 1]))
        if nu >= k:
            row.measuredPruneRate = estimate_prune_rate(
                n, k, sigma, cfg.trials, np.random.default_rng([seed, 2]))
    if not 1 <= k <= n or m > candidate_count(n, k):
        return row
    f = random_formula(GeneratorConfig(n, m, k, seed))
    truth = brute_force_count(f) if n <= cfg.oracle_max_n else None
    counts = []
    if m <= cfg.exhaustive_max_m:
        r = signed_count_exhaustive(f)
        row.nodesExhaustive = r.nodes_visited
        counts.append(r.model_count)
    if n <= cfg.count_max_n and m <= cfg.count_max_m:
        r = signed_count_pruned(f)
        row.nodesPruned = r.nodes_visited
        counts.append(r.model_count)
        a1 = count_random_a1(f, sigma)
        row.nodesA1 = a1.nodes_visited
        if truth is not None:
            row.a1Agrees = a1.model_count == truth
    if truth is not None and counts:
        row.countAgrees = all(c == truth for c in counts)
    return row


def run_sweep(cfg: SweepConfig, workers: int = 1) -> list[BenchRow]:
    """One row per grid cell, in grid order regardless of ``workers``."""
    cells = cfg.grid()
    if workers <= 1 or len(cells) < 2:
        return [run_cell(c, cfg) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, cells, [cfg] * len(cells)))


def _fmt(name: str, value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if name in _REALS:
        return f"{value:.6f}"
    return str(value)


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in rows:
        w.writerow([_fmt(name, getattr(r, name)) for name in FIELDS])
    return buf.getvalue()


def rows_to_json(rows: list[BenchRow]) -> str:
    out = []
    for r in rows:
        d = asdict(r)
        out.append({k: round(v, 6) if k in _REALS and v is not None else v for k, v in d.items()})
    return json.dumps(out, indent=1) + "\n"


def fit_exponent(xs, ys) -> float:
    """Least-squares slope of log2(y) against x, ignoring empty or zero entries."""
    pts = [(x, math.log2(y)) for x, y in zip(xs, ys) if y]
    if len(pts) < 2:
        return float("nan")
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])
