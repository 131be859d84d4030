import random

import pytest
from hypothesis import strategies as st

from pseudoflat.polynomial import Polynomial

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return random.Random(20240611)


def polynomials(n, max_degree=2, max_terms=4):
    exps = st.tuples(*[st.integers(0, max_degree)] * n)
    coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda t: Polynomial(n, t))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
