import time

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from oscitime.phasefn import PhasePolyFourier

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []
_SESSION_START = time.perf_counter()


def random_function(rng: np.random.Generator, max_degree: int, max_k: int,
                    n_terms: int = 6) -> PhasePolyFourier:
    """Random element with coefficients drawn uniformly from the unit disc."""
    terms: dict[int, dict[int, complex]] = {}
    for _ in range(n_terms):
        d = int(rng.integers(0, max_degree + 1))
        k = int(rng.integers(-max_k, max_k + 1))
        r = np.sqrt(rng.random())
        terms.setdefault(d, {})[k] = complex(r * np.exp(2j * np.pi * rng.random()))
    return PhasePolyFourier(terms)


def max_coeff(f: PhasePolyFourier) -> float:
    return max((abs(c) for *_, c in f.items()), default=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def phase_functions(draw, max_degree: int = 3, max_k: int = 16):
    terms = draw(st.dictionaries(
        st.integers(0, max_degree),
        st.dictionaries(st.integers(-max_k, max_k), _coeff, max_size=5),
        max_size=4,
    ))
    return PhasePolyFourier(terms)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
    elapsed = time.perf_counter() - _SESSION_START
    terminalreporter.write_line(f"session wall time: {elapsed:.2f} s (budget 10 s)")
