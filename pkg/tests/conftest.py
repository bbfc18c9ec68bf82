import numpy as np
import pytest
from hypothesis import strategies as st

from measerr import CONSUMPTION_INCOME, PopulationSummary

ACCEPTANCE_LINES = []


@pytest.fixture
def s4():
    return CONSUMPTION_INCOME


def _nonzero(lo, hi):
    mag = st.floats(lo, hi, allow_nan=False, allow_infinity=False)
    return st.tuples(st.sampled_from([-1.0, 1.0]), mag).map(lambda t: t[0] * t[1])


summaries = st.builds(
    PopulationSummary,
    mu_y=_nonzero(1.0, 1e3),
    mu_x=_nonzero(1.0, 1e3),
    sigma2_y=st.floats(0.1, 1e4),
    sigma2_x=st.floats(0.1, 1e4),
    rho=st.floats(-1.0, 1.0),
    sigma2_u=st.floats(0.0, 1e3),
    sigma2_v=st.floats(0.0, 1e3),
    n=st.integers(2, 1000),
)


def random_summary(rng: np.random.Generator, positive: bool = False) -> PopulationSummary:
    """A valid summary with moderate coefficients of variation."""
    sign = lambda: 1.0 if positive else rng.choice([-1.0, 1.0])  # noqa: E731
    mu_y = sign() * rng.uniform(20, 500)
    mu_x = sign() * rng.uniform(20, 500)
    cv_y, cv_x = rng.uniform(0.05, 0.6, size=2)
    return PopulationSummary(
        mu_y=float(mu_y),
        mu_x=float(mu_x),
        sigma2_y=float((cv_y * mu_y) ** 2),
        sigma2_x=float((cv_x * mu_x) ** 2),
        rho=float(rng.uniform(-0.99, 0.99)),
        sigma2_u=float(rng.uniform(0, 0.5) * (cv_y * mu_y) ** 2),
        sigma2_v=float(rng.uniform(0, 0.5) * (cv_x * mu_x) ** 2),
        n=int(rng.integers(5, 500)),
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
