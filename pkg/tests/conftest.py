import numpy as np
import pytest
from hypothesis import strategies as st

from linmeas.gaussian import GaussianState

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def psi_unit():
    return GaussianState.minimum_uncertainty(0.0, 0.0, 1.0)


@pytest.fixture
def psi_offset():
    return GaussianState.minimum_uncertainty(2.0, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


finite = dict(allow_nan=False, allow_infinity=False)

mus = st.floats(min_value=1e-3, max_value=1 - 1e-3, **finite)
hbars = st.sampled_from([1.0, 0.5, 2.0, 1.054571817e-34 * 1e34])


@st.composite
def min_states(draw, hbar=None):
    h = draw(hbars) if hbar is None else hbar
    return GaussianState.minimum_uncertainty(
        draw(st.floats(-5, 5, **finite)),
        draw(st.floats(-5, 5, **finite)),
        draw(st.floats(0.05, 20, **finite)),
        h,
    )
