import json
from fractions import Fraction

import numpy as np
import pytest

from monocount.bench import (
    FIELDS,
    BenchRow,
    SweepConfig,
    _random_subsets,
    binomial_stderr,
    critical_nu,
    estimate_fruitless_rate,
    estimate_prune_rate,
    expected_prune_rate,
    fit_exponent,
    inner_exponent,
    prune_lower_bound,
    rows_to_csv,
    rows_to_json,
    run_sweep,
)
from monocount.counter import critical_saturation, fruitless_probability_exact


def test_subsets_are_uniform():
    from collections import Counter
    from scipy.stats import chisquare

    rows = _random_subsets(6, 3, 60_000, np.random.default_rng(5))
    assert (np.sort(rows, axis=1)[:, 1:] != np.sort(rows, axis=1)[:, :-1]).all()
    freq = Counter(tuple(sorted(r)) for r in rows.tolist())
    assert len(freq) == 20
    assert chisquare(list(freq.values())).pvalue > 0.001


def test_fruitless_rate_impossible_event():
    assert estimate_fruitless_rate(6, 3, 2, 1000, np.random.default_rng(0)) == 0.0


@pytest.mark.parametrize("n, k, nu, exact", [
    (8, 2, 8, Fraction(1, 4)),
    (5, 2, 3, Fraction(3, 40)),
])
def test_fruitless_rate_within_three_standard_errors(n, k, nu, exact):
    assert fruitless_probability_exact(n, k, nu) == exact
    est = estimate_fruitless_rate(n, k, nu, 100_000, np.random.default_rng(17))
    assert abs(est - float(exact)) <= 3 * binomial_stderr(float(exact), 100_000)


def test_prune_rate_large_sigma_saturates():
    # p at the critical state for n=16, k=2 is 36/480; with 8n draws a miss has chance (1-p)^128
    p = fruitless_probability_exact(16, 2, critical_nu(16, 2))
    assert 1 - float((1 - p) ** 128) > 0.9999
    assert estimate_prune_rate(16, 2, 8, 2000, np.random.default_rng(1)) == 1.0


def test_prune_rate_matches_binomial_complement():
    n, k, sigma, trials = 32, 3, 1, 20_000
    expected = expected_prune_rate(n, k, sigma)
    p = fruitless_probability_exact(n, k, critical_nu(n, k))
    assert expected == pytest.approx(1 - float((1 - p) ** (sigma * n)))
    est = estimate_prune_rate(n, k, sigma, trials, np.random.default_rng(8))
    assert abs(est - expected) <= 3 * binomial_stderr(expected, trials)


def test_prune_rate_empty_sample():
    with pytest.raises(ValueError):
        estimate_prune_rate(64, 2, 1, 0, np.random.default_rng(0))


def test_closed_forms():
    assert prune_lower_bound(64, 1) == pytest.approx(1 - 64 ** -1.4426950408889634)
    assert inner_exponent(3, 2) == pytest.approx(np.log2(6) / 3 + 1 / 3 - 1 / 18)
    assert critical_nu(65536, 4) == 16384
    assert critical_nu(12, 3) == 12
    assert critical_saturation(12, 3) == 1.0


def test_sweep_cell_with_oracle():
    cfg = SweepConfig(cells=[], n=[10], k=[3], m=[20], sigma=[2], seeds=[1])
    (row,) = run_sweep(cfg)
    assert (row.n, row.m, row.k, row.sigma, row.seed) == (10, 20, 3, 2, 1)
    assert row.nodesPruned <= row.nodesExhaustive
    assert row.countAgrees is True
    assert 0 <= row.measuredFruitless <= 1 and 0 <= row.measuredPruneRate <= 1


def test_empty_grid_gives_header_only():
    assert rows_to_csv(run_sweep(SweepConfig())) == ",".join(FIELDS) + "\n"
    assert json.loads(rows_to_json([])) == []


def test_infeasible_cells_emitted_with_nulls():
    cfg = SweepConfig.from_dict({
        "cells": [{"n": 2, "m": 9, "k": 2, "sigma": 1, "seed": 0},
                  {"n": 30, "m": 40, "k": 3, "sigma": 1, "seed": 0}],
        "oracleMaxN": 12, "exhaustiveMaxM": 10, "countMaxN": 20, "trials": 1000,
    })
    rows = run_sweep(cfg)
    assert len(rows) == 2
    assert rows[0].nodesPruned is None and rows[0].countAgrees is None
    assert rows[1].nodesExhaustive is None and rows[1].countAgrees is None
    assert rows[1].nodesPruned is None
    lines = rows_to_csv(rows).splitlines()
    assert len(lines) == 3
    assert lines[2].split(",")[FIELDS.index("nodesPruned")] == ""


def test_sweep_bytes_deterministic_and_worker_independent():
    cfg = SweepConfig(n=[8, 10], k=[2, 3], delta=[1.5], sigma=[1, 2], seeds=[0, 1], trials=2000)
    a = rows_to_csv(run_sweep(cfg))
    b = rows_to_csv(run_sweep(cfg))
    c = rows_to_csv(run_sweep(cfg, workers=3))
    assert a == b == c
    assert len(a.splitlines()) == 1 + 2 * 2 * 2 * 2


def test_csv_format():
    row = BenchRow(10, 20, 3, 2.0, 2, 1, 5, 4, 3, True, False, 0.125)
    line = rows_to_csv([row]).splitlines()[1].split(",")
    assert line[:12] == ["10", "20", "3", "2.000000", "2", "1", "5", "4", "3", "true", "false", "0.125000"]


def test_config_rejects_unknown_keys():
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"nn": [3]})
    assert SweepConfig.from_dict({"seeds": 3}).seeds == [0, 1, 2]


def test_fit_exponent():
    xs = [10, 20, 30]
    assert fit_exponent(xs, [2 ** (0.5 * x) for x in xs]) == pytest.approx(0.5)
    assert np.isnan(fit_exponent([1], [4]))
