import random

import pytest
from hypothesis import strategies as st

from monocount.cnf import Clause, Formula
from monocount.generate import GeneratorConfig, candidate_count, random_formula


@st.composite
def formulas(draw, max_n=7, max_m=10, max_width=None):
    n = draw(st.integers(1, max_n))
    width = st.integers(1, min(n, max_width or n))
    raw = draw(st.lists(
        st.tuples(width, st.randoms(use_true_random=False)), max_size=max_m))
    clauses = []
    seen = set()
    for w, rnd in raw:
        variables = rnd.sample(range(1, n + 1), w)
        c = Clause(v if rnd.random() < 0.5 else -v for v in variables)
        if c not in seen:
            seen.add(c)
            clauses.append(c)
    return Formula(n, tuple(clauses))


def mixed_corpus(count, seed=0, n_range=(2, 12), m_range=(0, 20), widths=(1, 2, 3, 4)):
    """Seeded random instances with varied n, m and exact clause width."""
    rnd = random.Random(seed)
    out = []
    while len(out) < count:
        k = rnd.choice(widths)
        n = rnd.randint(max(n_range[0], k), n_range[1])
        m = min(rnd.randint(*m_range), candidate_count(n, k))
        out.append(random_formula(GeneratorConfig(n, m, k, rnd.getrandbits(32))))
    return out


@pytest.fixture(scope="session")
def corpus():
    return mixed_corpus(200)
