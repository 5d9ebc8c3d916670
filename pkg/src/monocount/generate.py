"""Uniform random k-CNF instances.

All randomness goes through :class:`numpy.random.Generator` seeded with
``numpy.random.default_rng(seed)`` (PCG64), so a seed fixes the instance
on every platform numpy supports.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .cnf import Clause, Formula


def candidate_count(n: int, k: int) -> int:
    """Number of distinct width-k clauses over n variables."""
    return (1 << k) * comb(n, k)


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    m: int
    k: int
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.m < 0:
            raise ValueError(f"m must be non-negative, got {self.m}")
        if self.m > candidate_count(self.n, self.k):
            raise ValueError(
                f"m={self.m} exceeds the {candidate_count(self.n, self.k)} "
                f"distinct clauses of width {self.k} over {self.n} variables"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def random_clause(n: int, k: int, rng: np.random.Generator) -> Clause:
    """Uniform draw from the 2^k * C(n, k) clauses of width exactly k."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    variables = rng.choice(n, size=k, replace=False) + 1
    signs = rng.integers(0, 2, size=k)
    return Clause(int(v) if s else -int(v) for v, s in zip(variables, signs))


def random_formula(cfg: GeneratorConfig) -> Formula:
    """m distinct random clauses in draw order; collisions are redrawn."""
    rng = np.random.default_rng(cfg.seed)
    seen: set[Clause] = set()
    clauses = []
    while len(clauses) < cfg.m:
        c = random_clause(cfg.n, cfg.k, rng)
        if c in seen:
            continue
        seen.add(c)
        clauses.append(c)
    return Formula(cfg.n, tuple(clauses))
