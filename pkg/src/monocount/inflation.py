"""Random inflation: widen every clause without changing the set of models.

A clause c is replaced by the 2^z clauses obtained by appending z extra
variables (drawn from those c does not mention) in every sign combination.
Resolving those 2^z clauses on the added variables gives back c, and c
subsumes each of them, so the two formulas have the same models.

One clause of every inflated group, picked at random, becomes a tail clause.
Tail clauses are placed after all others, so the split counter sees them as
its fully enumerated tail.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cnf import Clause, Formula
from .counter import A2, CountResult, count_random_a1

_REJECTION_TRIES = 32
_RESTARTS = 64


class InflationError(ValueError):
    pass


def inflation_width(n: int) -> int:
    """Number of literals added per clause: max(1, ceil(log2 log2 n))."""
    if n < 4:
        raise InflationError(f"inflation needs n >= 4, got n={n}")
    return max(1, math.ceil(math.log2(math.log2(n))))


def inflate_with(c: Clause, variables) -> list[Clause]:
    """The 2^z extensions of c by ``variables``, ordered by sign pattern.

    Pattern bit i set means variable ``variables[i]`` is added negated.
    """
    z = len(variables)
    out = []
    for pattern in range(1 << z):
        added = [-v if pattern >> i & 1 else v for i, v in enumerate(variables)]
        out.append(Clause(c.literals + tuple(added)))
    return out


def _free_variables(c: Clause, n: int) -> list[int]:
    used = c.variables
    return [v for v in range(1, n + 1) if v not in used]


def inflate_clause(c: Clause, z: int, n: int, rng: np.random.Generator) -> list[Clause]:
    """Inflate c with z distinct variables chosen uniformly from those it lacks."""
    if z < 1:
        raise InflationError(f"z must be positive, got {z}")
    free = _free_variables(c, n)
    if len(free) < z:
        raise InflationError(f"clause {list(c.literals)} has only {len(free)} free variables, needs {z}")
    chosen = sorted(int(v) for v in rng.choice(free, size=z, replace=False))
    return inflate_with(c, chosen)


@dataclass
class InflationEntry:
    pass_index: int
    clause_index: int  # 0-based position in the original formula
    original: Clause
    chosen: tuple[int, ...]
    inflated: list[Clause]
    tail: Clause

    def head_clauses(self) -> list[Clause]:
        return [c for c in self.inflated if c != self.tail]

    def to_dict(self) -> dict:
        return {
            "pass": self.pass_index,
            "clauseIndex": self.clause_index,
            "originalClause": list(self.original.literals),
            "chosenVariables": list(self.chosen),
            "inflatedClauses": [list(c.literals) for c in self.inflated],
            "tailClause": list(self.tail.literals),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "InflationEntry":
        return cls(
            d["pass"],
            d["clauseIndex"],
            Clause(d["originalClause"]),
            tuple(d["chosenVariables"]),
            [Clause(c) for c in d["inflatedClauses"]],
            Clause(d["tailClause"]),
        )


@dataclass
class InflationRecord:
    """Audit trail of an inflation run: one entry per (pass, original clause)."""

    z: int
    sigma: int
    passes: int
    entries: list[InflationEntry] = field(default_factory=list)
    skipped: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "z": self.z,
            "sigma": self.sigma,
            "passes": self.passes,
            "entries": [e.to_dict() for e in self.entries],
            "skipped": [list(s) for s in self.skipped],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "InflationRecord":
        return cls(
            d["z"],
            d["sigma"],
            d["passes"],
            [InflationEntry.from_dict(e) for e in d["entries"]],
            [tuple(s) for s in d.get("skipped", [])],
        )


def pass_count(m: int, n: int, sigma: int) -> int:
    if m == 0:
        return 0
    return 1 if m >= sigma * n else math.ceil(sigma * n / m)


def _pick_variables(c: Clause, z: int, n: int, taken: set[Clause], rng) -> tuple[int, ...] | None:
    """z variables for c whose inflation avoids every clause in ``taken``.

    Rejection sampling first; if that keeps failing, a uniform pick among all
    collision-free choices, or None when there is none.
    """
    free = _free_variables(c, n)
    if len(free) < z:
        raise InflationError(
            f"clause {list(c.literals)} is too wide to inflate by {z} over {n} variables"
        )
    for _ in range(_REJECTION_TRIES):
        chosen = tuple(sorted(int(v) for v in rng.choice(free, size=z, replace=False)))
        if not any(x in taken for x in inflate_with(c, chosen)):
            return chosen
    options = [
        combo for combo in itertools.combinations(free, z)
        if not any(x in taken for x in inflate_with(c, combo))
    ]
    if not options:
        return None
    return tuple(options[int(rng.integers(len(options)))])


def inflate_formula(f: Formula, sigma: int, rng: np.random.Generator) -> tuple[Formula, InflationRecord]:
    """Model-preserving widening of f; tail clauses occupy the last positions.

    When m < sigma * n the pass is repeated ceil(sigma * n / m) times with fresh
    variable draws, so the tail holds at least sigma * n clauses.  An entry whose
    every variable choice would duplicate an existing clause is skipped (and
    listed in ``record.skipped``); that is only allowed when an earlier pass
    already inflated the same original clause.  If a first-pass clause has no
    free choice left, the whole draw restarts from the same generator.
    """
    if sigma < 1:
        raise InflationError(f"sigma must be >= 1, got {sigma}")
    n = f.num_vars
    z = inflation_width(n)
    passes = pass_count(f.m, n, sigma)
    for _ in range(_RESTARTS):
        record = _try_inflate(f, z, sigma, passes, rng)
        if record is not None:
            return _assemble(n, record), record
    raise InflationError(
        f"no collision-free inflation found in {_RESTARTS} attempts (n={n}, z={z})"
    )


def _try_inflate(f: Formula, z: int, sigma: int, passes: int, rng) -> InflationRecord | None:
    # Greedy draw; None when a first-pass clause is boxed in by earlier choices.
    n = f.num_vars
    record = InflationRecord(z, sigma, passes)
    taken: set[Clause] = set()
    covered: set[int] = set()
    for p in range(passes):
        for i, c in enumerate(f.clauses):
            chosen = _pick_variables(c, z, n, taken, rng)
            if chosen is None:
                if i not in covered:
                    return None
                record.skipped.append((p, i))
                continue
            group = inflate_with(c, chosen)
            tail = group[int(rng.integers(len(group)))]
            taken.update(group)
            covered.add(i)
            record.entries.append(InflationEntry(p, i, c, chosen, group, tail))
    return record


def _assemble(n: int, record: InflationRecord) -> Formula:
    head = [x for e in record.entries for x in e.head_clauses()]
    tail = [e.tail for e in record.entries]
    return Formula(n, tuple(head + tail))


@dataclass
class Verification:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_inflation(f: Formula, f_prime: Formula, rec: InflationRecord) -> Verification:
    """Structural check that ``f_prime`` is a faithful inflation of ``f``.

    Each entry must be the original clause extended by the same z variables
    (none already in the clause) in all 2^z sign patterns, so the group resolves
    back to the original; every original clause needs an entry; and the
    entries, head parts first and tails last, must rebuild ``f_prime`` exactly.
    """
    if f_prime.num_vars != f.num_vars:
        return Verification(False, "variable counts differ")
    n = f.num_vars
    covered = set()
    for idx, e in enumerate(rec.entries):
        where = f"entry {idx} (pass {e.pass_index}, clause {e.clause_index})"
        if not 0 <= e.clause_index < f.m or f.clauses[e.clause_index] != e.original:
            return Verification(False, f"{where}: original clause not in formula at that index")
        if len(e.chosen) != rec.z or len(set(e.chosen)) != rec.z:
            return Verification(False, f"{where}: expected {rec.z} distinct added variables")
        if any(not 1 <= v <= n for v in e.chosen):
            return Verification(False, f"{where}: added variable out of range")
        if set(e.chosen) & e.original.variables:
            return Verification(False, f"{where}: added variable already occurs in the clause")
        base = set(e.original.literals)
        patterns = set()
        for x in e.inflated:
            lits = set(x.literals)
            extra = lits - base
            if not base <= lits or {abs(l) for l in extra} != set(e.chosen) or len(extra) != rec.z:
                return Verification(False, f"{where}: clause {list(x.literals)} is not the original plus the chosen variables")
            patterns.add(frozenset(extra))
        if len(e.inflated) != 1 << rec.z or len(patterns) != 1 << rec.z:
            return Verification(False, f"{where}: sign patterns do not cover all {1 << rec.z} combinations")
        if e.tail not in e.inflated:
            return Verification(False, f"{where}: tail clause is not one of the inflated clauses")
        covered.add(e.clause_index)
    missing = sorted(set(range(f.m)) - covered)
    if missing:
        return Verification(False, f"original clauses {missing} have no inflation entry")
    expected = [x for e in rec.entries for x in e.head_clauses()] + [e.tail for e in rec.entries]
    if list(f_prime.clauses) != expected:
        return Verification(False, "entries do not rebuild the inflated formula's clause sequence")
    return Verification(True)


def count_a2(f: Formula, sigma: int, rng: np.random.Generator, threads: int = 1) -> CountResult:
    """Inflate, then run the split counter on the result."""
    f_prime, _ = inflate_formula(f, sigma, rng)
    r = count_random_a1(f_prime, sigma, threads)
    r.mode = A2
    return r
