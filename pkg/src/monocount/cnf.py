"""CNF data model and DIMACS reading/writing.

Literals are plain DIMACS integers: ``v`` for a variable, ``-v`` for its
negation.  A :class:`Clause` keeps its literals sorted by variable so two
clauses with the same literal set compare equal, and caches the positive and
negative variable bitmasks used by the counting engines (bit ``v - 1`` stands
for variable ``v``).
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, TextIO, Union


class CnfError(ValueError):
    """Malformed DIMACS input or an invalid clause/formula."""


def _var(lit: int) -> int:
    return lit if lit > 0 else -lit


@dataclass(frozen=True)
class Clause:
    literals: tuple[int, ...]
    pos: int = field(init=False, repr=False, compare=False)
    neg: int = field(init=False, repr=False, compare=False)

    def __init__(self, literals: Iterable[int]):
        lits = tuple(sorted(literals, key=_var))
        if not lits:
            raise CnfError("empty clause")
        pos = neg = 0
        for lit in lits:
            if lit == 0:
                raise CnfError("literal 0 is not a variable")
            bit = 1 << (_var(lit) - 1)
            if (pos | neg) & bit:
                raise CnfError(f"variable {_var(lit)} occurs twice in clause {list(lits)}")
            if lit > 0:
                pos |= bit
            else:
                neg |= bit
        object.__setattr__(self, "literals", lits)
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "neg", neg)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(_var(lit) for lit in self.literals)

    @property
    def mask(self) -> int:
        return self.pos | self.neg

    def max_var(self) -> int:
        return _var(self.literals[-1])


@dataclass(frozen=True)
class Formula:
    """An ordered sequence of pairwise distinct clauses over ``num_vars`` variables.

    Clause order matters: the split counter treats the last clauses as the tail.
    """

    num_vars: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.num_vars < 1:
            raise CnfError(f"number of variables must be positive, got {self.num_vars}")
        clauses = tuple(c if isinstance(c, Clause) else Clause(c) for c in self.clauses)
        seen = set()
        for i, c in enumerate(clauses, 1):
            if c.max_var() > self.num_vars:
                raise CnfError(f"clause {i} uses variable {c.max_var()} > n={self.num_vars}")
            if c in seen:
                raise CnfError(f"clause {i} {list(c.literals)} is a duplicate")
            seen.add(c)
        object.__setattr__(self, "clauses", clauses)

    @property
    def n(self) -> int:
        return self.num_vars

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def density(self) -> float:
        return self.m / self.num_vars

    def min_width(self) -> int:
        return min((len(c) for c in self.clauses), default=0)

    def __len__(self) -> int:
        return len(self.clauses)


# An assignment is either a sequence of n booleans (index i is variable i + 1)
# or a mapping from variable index to boolean covering 1..n.
Assignment = Union[Sequence[bool], Mapping[int, bool]]


def assignment_mask(a: Assignment, n: int) -> int:
    """Bitmask of the variables set to true."""
    if isinstance(a, Mapping):
        missing = [v for v in range(1, n + 1) if v not in a]
        if missing:
            raise ValueError(f"assignment misses variables {missing}")
        return sum(1 << (v - 1) for v in range(1, n + 1) if a[v])
    if len(a) != n:
        raise ValueError(f"assignment has {len(a)} values, expected {n}")
    return sum(1 << i for i, b in enumerate(a) if b)


def clause_satisfied(c: Clause, true_mask: int) -> bool:
    return bool(c.pos & true_mask) or bool(c.neg & ~true_mask)


def evaluate(f: Formula, a: Assignment) -> bool:
    """True iff every clause has a literal made true by ``a``."""
    mask = assignment_mask(a, f.num_vars)
    return all(clause_satisfied(c, mask) for c in f.clauses)


def parse_dimacs(source: Union[str, TextIO]) -> Formula:
    text = source if isinstance(source, str) else source.read()
    header = None
    clauses = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise CnfError(f"line {lineno}: second header")
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise CnfError(f"line {lineno}: bad header {line!r}")
            try:
                header = (int(fields[2]), int(fields[3]))
            except ValueError:
                raise CnfError(f"line {lineno}: bad header {line!r}") from None
            if header[0] < 1 or header[1] < 0:
                raise CnfError(f"line {lineno}: bad header {line!r}")
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before header")
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer token") from None
        for lit in nums:
            if lit == 0:
                if not pending:
                    raise CnfError(f"line {lineno}: empty clause")
                clauses.append(_checked_clause(pending, header[0], lineno))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise CnfError("missing 'p cnf' header")
    if pending:
        clauses.append(_checked_clause(pending, header[0], "EOF"))
    n, m = header
    if len(clauses) != m:
        raise CnfError(f"header declares {m} clauses, found {len(clauses)}")
    seen = set()
    for i, c in enumerate(clauses, 1):
        if c in seen:
            raise CnfError(f"clause {i} {list(c.literals)} is a duplicate")
        seen.add(c)
    return Formula(n, tuple(clauses))


def _checked_clause(lits: list[int], n: int, where) -> Clause:
    for lit in lits:
        if _var(lit) > n:
            raise CnfError(f"line {where}: variable {_var(lit)} exceeds n={n}")
    try:
        return Clause(lits)
    except CnfError as exc:
        raise CnfError(f"line {where}: {exc}") from None


def write_dimacs(f: Formula, out: TextIO | None = None) -> str:
    buf = io.StringIO()
    buf.write(f"p cnf {f.num_vars} {f.m}\n")
    for c in f.clauses:
        buf.write(" ".join(map(str, c.literals)) + " 0\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def read_dimacs(path) -> Formula:
    with open(path, encoding="ascii", newline="") as fh:
        return parse_dimacs(fh)
