"""Brute-force ground truth for testing the counting engines.

Neither function shares code with :mod:`monocount.counter`: the model count
walks all 2^n assignments, and the signed sum walks all 2^m clause subsets
directly, building their sign masks by doubling rather than by recursion.
"""
from __future__ import annotations

import numpy as np

from .cnf import Formula

MAX_ORACLE_VARS = 30
MAX_SIGNED_SUM_CLAUSES = 22
_CHUNK = 1 << 20


class OracleLimitError(ValueError):
    """The instance is beyond what brute force can handle."""


def brute_force_count(f: Formula) -> int:
    """Number of assignments satisfying every clause, by enumeration."""
    n = f.num_vars
    if n > MAX_ORACLE_VARS:
        raise OracleLimitError(f"brute force limited to n <= {MAX_ORACLE_VARS}, got n={n}")
    total = 0
    for lo in range(0, 1 << n, _CHUNK):
        a = np.arange(lo, min(lo + _CHUNK, 1 << n), dtype=np.int64)
        ok = np.ones(a.shape, dtype=bool)
        for c in f.clauses:
            # a falsifies c when no positive literal is set and every negated one is
            falsified = ((a & c.pos) == 0) & ((a & c.neg) == c.neg)
            ok &= ~falsified
        total += int(ok.sum())
    return total


def brute_force_signed_sum(f: Formula) -> int:
    """Model count from the subset identity, enumerating all 2^m clause subsets.

    Uses the form that includes the empty subset:
    sum over v of (E_v - O_v) * 2^(n - v).
    """
    n, m = f.num_vars, f.m
    if m > MAX_SIGNED_SUM_CLAUSES:
        raise OracleLimitError(
            f"subset enumeration limited to m <= {MAX_SIGNED_SUM_CLAUSES}, got m={m}"
        )
    if n > 62:
        raise OracleLimitError("signed-sum oracle packs variables into int64")
    # subset s has index sum of 2^j over member clauses j
    pos = np.zeros(1, dtype=np.int64)
    neg = np.zeros(1, dtype=np.int64)
    size = np.zeros(1, dtype=np.int64)
    for c in f.clauses:
        pos = np.concatenate([pos, pos | c.pos])
        neg = np.concatenate([neg, neg | c.neg])
        size = np.concatenate([size, size + 1])
    monotone = (pos & neg) == 0
    nvars = np.bitwise_count(pos | neg).astype(np.int64)
    sign = np.where(size % 2 == 0, 1, -1)
    signed = np.zeros(n + 1, dtype=np.int64)
    np.add.at(signed, nvars[monotone], sign[monotone])
    return sum(int(signed[nu]) << (n - nu) for nu in range(n + 1))

