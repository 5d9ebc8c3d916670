"""Exact #SAT by signed enumeration of monotone sub-formulae."""
from .cnf import Clause, CnfError, Formula, evaluate, parse_dimacs, read_dimacs, write_dimacs
from .counter import (
    CountResult,
    ParityTally,
    SignState,
    apply_identity,
    count_random_a1,
    critical_saturation,
    exists_fruitless_ahead,
    fruitless_probability_exact,
    is_compatible,
    is_fruitless,
    signed_count_exhaustive,
    signed_count_pruned,
)
from .generate import GeneratorConfig, random_clause, random_formula
from .inflation import InflationRecord, count_a2, inflate_clause, inflate_formula, verify_inflation
from .oracle import brute_force_count, brute_force_signed_sum

__version__ = "0.1.0"
