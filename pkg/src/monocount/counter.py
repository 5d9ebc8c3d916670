"""Model counting by signed enumeration of monotone sub-formulae.

A sub-formula (a subset of the clauses) is monotone when no variable appears
in it with both signs.  Writing O_v / E_v for the number of non-empty
monotone sub-formulae mentioning v variables with an odd / even number of
clauses, the number of models of an n-variable CNF is

    2^n - sum_v (O_v - E_v) * 2^(n - v).

Every engine below walks the same recursion tree: the root is the empty
sub-formula, and a node for sub-formula P at level L has one child per clause
j >= L that keeps P monotone (the child is P + c_j at level j + 1).  Each
tree node is therefore one monotone sub-formula, visited once.

Pruning rests on one observation.  If some clause c_j at or after the current
level only uses variables P already mentions, with the same signs
("fruitless" for P), then toggling c_j pairs every sub-formula in the
subtree below P with another one of equal variable count and opposite clause
parity.  The subtree contributes nothing and can be dropped whole.

The split counter (``count_random_a1``) also drops every head sub-formula
whose saturation (mentioned variables / n) reaches the critical value.  That
step is only correct with high probability on random instances, so its
results are flagged inexact.
"""
from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernel
from .cnf import Clause, Formula

EXHAUSTIVE = "exhaustive"
PRUNED = "pruned"
A1 = "a1"
A2 = "a2"
MODES = (EXHAUSTIVE, PRUNED, A1, A2)


class InconsistentTally(ArithmeticError):
    """The identity produced a count outside [0, 2^n]."""


@dataclass(frozen=True)
class SignState:
    """Signature of a monotone sub-formula: which variables occur, with which sign.

    ``pos``/``neg`` are variable bitmasks (bit v - 1 for variable v).  ``level``
    is the 1-based index of the next clause the traversal would consider.
    """

    pos: int = 0
    neg: int = 0
    level: int = 1

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError("a variable cannot carry both signs")
        if self.level < 1:
            raise ValueError("level is 1-based")

    @classmethod
    def from_signs(cls, signs: dict[int, bool], level: int = 1) -> "SignState":
        pos = sum(1 << (v - 1) for v, s in signs.items() if s)
        neg = sum(1 << (v - 1) for v, s in signs.items() if not s)
        return cls(pos, neg, level)

    @classmethod
    def of_clauses(cls, clauses, level: int = 1) -> "SignState":
        pos = neg = 0
        for c in clauses:
            pos |= c.pos
            neg |= c.neg
        return cls(pos, neg, level)

    @property
    def nu(self) -> int:
        return (self.pos | self.neg).bit_count()

    @property
    def signs(self) -> dict[int, bool]:
        out = {}
        mask, v = self.pos | self.neg, 1
        while mask:
            if mask & 1:
                out[v] = bool(self.pos >> (v - 1) & 1)
            mask >>= 1
            v += 1
        return out

    def saturation(self, n: int) -> float:
        return self.nu / n

    def add(self, c: Clause) -> "SignState":
        return SignState(self.pos | c.pos, self.neg | c.neg, self.level)


def is_compatible(state: SignState, c: Clause) -> bool:
    return not (c.pos & state.neg or c.neg & state.pos)


def is_fruitless(state: SignState, c: Clause) -> bool:
    # compatible, and every variable of c already carries c's sign in state
    return c.pos & ~state.pos == 0 and c.neg & ~state.neg == 0


def exists_fruitless_ahead(state: SignState, f: Formula, start: int) -> bool:
    """Is any clause at 1-based index >= ``start`` fruitless for ``state``?"""
    if not 1 <= start <= f.m + 1:
        raise ValueError(f"start must lie in [1, {f.m + 1}], got {start}")
    return any(is_fruitless(state, c) for c in f.clauses[start - 1:])


@dataclass
class ParityTally:
    """Per-variable-count tallies of odd and even sub-formulae."""

    n: int
    odd: list[int] = field(default=None)
    even: list[int] = field(default=None)

    def __post_init__(self):
        if self.odd is None:
            self.odd = [0] * (self.n + 1)
        if self.even is None:
            self.even = [0] * (self.n + 1)

    def add(self, nu: int, odd: bool) -> None:
        if odd:
            self.odd[nu] += 1
        else:
            self.even[nu] += 1

    def merge(self, other: "ParityTally") -> None:
        for i in range(self.n + 1):
            self.odd[i] += other.odd[i]
            self.even[i] += other.even[i]

    def signed(self) -> list[int]:
        return [o - e for o, e in zip(self.odd, self.even)]


def apply_identity(t: ParityTally, n: int, strict: bool = True) -> int:
    """2^n - sum_v (odd[v] - even[v]) * 2^(n - v), over a tally without the empty set.

    An exact tally always lands in [0, 2^n]; anything else is a bug and raises.
    With ``strict=False`` (the probabilistic modes, whose tallies may be
    incomplete) the value is clamped into range instead.
    """
    total = 0
    for nu in range(1, n + 1):
        diff = t.odd[nu] - t.even[nu]
        if diff:
            total += diff << (n - nu)
    count = (1 << n) - total
    if not 0 <= count <= 1 << n:
        if not strict:
            return min(max(count, 0), 1 << n)
        raise InconsistentTally(f"identity gave {count}, outside [0, 2^{n}]")
    return count


@dataclass
class CountResult:
    model_count: int
    mode: str
    nodes_visited: int = 0
    subtrees_pruned: int = 0
    exact: bool = True
    tally: ParityTally | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "modelCount": str(self.model_count),
            "mode": self.mode,
            "exact": self.exact,
            "nodesVisited": self.nodes_visited,
            "subtreesPruned": self.subtrees_pruned,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def critical_saturation(n: int, k: int) -> float:
    """min(1, 2 * (log2 n)^(1/k) / n^(1/k))."""
    if n < 2:
        raise ValueError(f"critical saturation needs n >= 2, got {n}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return min(1.0, 2.0 * math.log2(n) ** (1.0 / k) / n ** (1.0 / k))


def fruitless_probability_exact(n: int, k: int, nu: int) -> Fraction:
    """Chance a uniform width-k clause is fruitless for a signature on nu variables."""
    if not 0 <= nu <= n or not 1 <= k <= n:
        raise ValueError(f"need 0 <= nu <= n and 1 <= k <= n (n={n}, k={k}, nu={nu})")
    return Fraction(math.comb(nu, k), (1 << k) * math.comb(n, k))


# --- traversal ------------------------------------------------------------


@dataclass(frozen=True)
class _Plan:
    n: int
    pos: tuple[int, ...]
    neg: tuple[int, ...]
    prune: bool
    head: int = 0  # clauses [0, head) form the saturation-limited head
    head_cap: float = math.inf  # head sub-formulae need nu < head_cap


class _Walk:
    __slots__ = ("plan", "tally", "nodes", "pruned")

    def __init__(self, plan: _Plan):
        self.plan = plan
        self.tally = ParityTally(plan.n)
        self.nodes = 0
        self.pruned = 0

    def fruitless_ahead(self, pos: int, neg: int, start: int) -> bool:
        cpos, cneg = self.plan.pos, self.plan.neg
        for j in range(start, len(cpos)):
            if cpos[j] & ~pos == 0 and cneg[j] & ~neg == 0:
                return True
        return False

    def child(self, j: int, pos: int, neg: int, odd: bool) -> None:
        """Enter the node for (parent + clause j); the caller checked compatibility."""
        plan = self.plan
        pos |= plan.pos[j]
        neg |= plan.neg[j]
        nu = (pos | neg).bit_count()
        if j < plan.head and nu >= plan.head_cap:
            self.pruned += 1
            return
        self.nodes += 1
        if plan.prune and self.fruitless_ahead(pos, neg, j + 1):
            self.pruned += 1
            return
        self.tally.add(nu, odd)
        self.expand(j + 1, pos, neg, odd)

    def expand(self, start: int, pos: int, neg: int, odd: bool) -> None:
        cpos, cneg = self.plan.pos, self.plan.neg
        for j in range(start, len(cpos)):
            if cpos[j] & neg or cneg[j] & pos:
                continue
            self.child(j, pos, neg, not odd)


def _walk_roots(plan: _Plan, roots: list[int], compiled: bool) -> tuple[list[int], list[int], int, int]:
    if compiled:
        odd, even, nodes, pruned = _kernel.walk(
            _kernel.as_uint64(plan.pos),
            _kernel.as_uint64(plan.neg),
            plan.n,
            plan.prune,
            plan.head,
            float(plan.head_cap),
            np.array(roots, dtype=np.int64),
        )
        return [int(x) for x in odd], [int(x) for x in even], int(nodes), int(pruned)
    walk = _Walk(plan)
    for j in roots:
        walk.child(j, 0, 0, True)
    return walk.tally.odd, walk.tally.even, walk.nodes, walk.pruned


def _run(plan: _Plan, threads: int = 1, compiled: bool | None = None) -> tuple[ParityTally, int, int]:
    """Walk the whole tree; returns (tally, nodes visited, subtrees pruned).

    ``compiled=None`` picks the compiled kernel whenever n fits in 64 bits.
    """
    m = len(plan.pos)
    if compiled is None:
        compiled = plan.n <= _kernel.MAX_KERNEL_VARS
    elif compiled and plan.n > _kernel.MAX_KERNEL_VARS:
        raise ValueError(f"compiled traversal handles n <= {_kernel.MAX_KERNEL_VARS}")
    if not compiled and sys.getrecursionlimit() < 4 * m + 100:
        sys.setrecursionlimit(4 * m + 100)
    tally = ParityTally(plan.n)
    nodes, pruned = 1, 0  # the root (empty sub-formula) is always visited
    if threads <= 1 or m < 2:
        parts = [_walk_roots(plan, list(range(m)), compiled)]
    else:
        # top-level subtrees are independent; round-robin spreads the heavy early roots
        chunks = [list(range(i, m, threads)) for i in range(min(threads, m))]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(_walk_roots, [plan] * len(chunks), chunks, [compiled] * len(chunks)))
    for odd, even, n_nodes, n_pruned in parts:
        tally.merge(ParityTally(plan.n, odd, even))
        nodes += n_nodes
        pruned += n_pruned
    return tally, nodes, pruned


def _plan(f: Formula, prune: bool, **kw) -> _Plan:
    return _Plan(
        f.num_vars,
        tuple(c.pos for c in f.clauses),
        tuple(c.neg for c in f.clauses),
        prune,
        **kw,
    )


def signed_count_exhaustive(f: Formula, threads: int = 1) -> CountResult:
    """Enumerate every monotone sub-formula; practical up to m around 25."""
    tally, nodes, pruned = _run(_plan(f, prune=False), threads)
    return CountResult(apply_identity(tally, f.num_vars), EXHAUSTIVE, nodes, pruned, True, tally)


def signed_count_pruned(f: Formula, threads: int = 1) -> CountResult:
    """Like the exhaustive count, but skip subtrees that have a fruitless clause ahead."""
    tally, nodes, pruned = _run(_plan(f, prune=True), threads)
    return CountResult(apply_identity(tally, f.num_vars), PRUNED, nodes, pruned, True, tally)


def split_point(m: int, n: int, sigma: int) -> int:
    """Length of the head part: everything except the last sigma * n clauses."""
    return max(0, m - sigma * n)


def count_random_a1(f: Formula, sigma: int, threads: int = 1) -> CountResult:
    """Split counter for random formulae; exact only with high probability.

    The last ``sigma * n`` clauses form the tail and are enumerated fully; the
    head only contributes sub-formulae below the critical saturation.
    """
    if sigma < 1:
        raise ValueError(f"sigma must be >= 1, got {sigma}")
    n = f.num_vars
    if f.m == 0:
        return CountResult(1 << n, A1, 1, 0, False, ParityTally(n))
    head = split_point(f.m, n, sigma)
    s_crit = critical_saturation(n, f.min_width()) if n >= 2 else 1.0
    plan = _plan(f, prune=True, head=head, head_cap=s_crit * n)
    tally, nodes, pruned = _run(plan, threads)
    return CountResult(apply_identity(tally, n, strict=False), A1, nodes, pruned, False, tally)
