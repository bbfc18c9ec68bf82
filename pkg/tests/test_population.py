import math

import pytest
from hypothesis import given

from measerr import DomainError, PopulationSummary, derive_moments, validate_summary

from .conftest import summaries


def test_consumption_income_row_is_valid(s4):
    assert validate_summary(s4) is s4


@pytest.mark.parametrize(
    "change, message",
    [
        ({"rho": 1.2}, "correlation out of range"),
        ({"mu_x": 0.0}, "auxiliary mean must be nonzero"),
        ({"mu_y": 0.0}, "study mean must be nonzero"),
        ({"sigma2_y": 0.0}, "sigma2_y"),
        ({"sigma2_x": -1.0}, "sigma2_x"),
        ({"sigma2_u": -0.5}, "sigma2_u"),
        ({"n": 1}, "at least 2"),
        ({"n": 2.5}, "integer"),
        ({"rho": float("nan")}, "finite"),
    ],
)
def test_validation_names_the_field(s4, change, message):
    bad = PopulationSummary(**{**s4.to_dict(), **change})
    with pytest.raises(DomainError, match=message):
        validate_summary(bad)


def test_boundary_correlation_accepted(s4):
    validate_summary(PopulationSummary(**{**s4.to_dict(), "rho": -1.0}))


def test_moments_on_consumption_income(s4):
    m = derive_moments(s4)
    # hand arithmetic: (sigma2 + error variance) / (n mu^2) and rho sigma_y sigma_x / (n mu_y mu_x)
    assert m.delta0 == pytest.approx((1278 + 36) / (10 * 127**2), rel=1e-12)
    assert m.delta1 == pytest.approx((3300 + 36) / (10 * 170**2), rel=1e-12)
    assert m.delta01 == pytest.approx(0.964 * math.sqrt(1278 * 3300) / (10 * 127 * 170), rel=1e-12)
    assert m.delta0 == pytest.approx(0.0081469, abs=1e-7)
    assert m.delta1 == pytest.approx(0.0115432, abs=1e-7)
    assert m.theta == 0.1


def test_error_free_moments(s4):
    s = PopulationSummary(**{**s4.to_dict(), "sigma2_u": 0.0, "sigma2_v": 0.0})
    m = derive_moments(s)
    assert m.delta0 == pytest.approx(s.theta * s.c_y**2, rel=1e-12)
    assert m.delta1 == pytest.approx(s.theta * s.c_x**2, rel=1e-12)


def test_uncorrelated_cross_moment_is_zero(s4):
    assert derive_moments(PopulationSummary(**{**s4.to_dict(), "rho": 0.0})).delta01 == 0.0


def test_negative_means_keep_sign_of_cv():
    s = PopulationSummary(-10.0, 5.0, 4.0, 1.0, 0.5, 0.0, 0.0, 4)
    m = derive_moments(s)
    assert m.c_y < 0 and m.c_x > 0
    assert m.delta01 < 0


@given(summaries)
def test_measurement_error_inflates_moments(s):
    m = derive_moments(s)
    assert m.delta0 >= s.theta * s.c_y**2 * (1 - 1e-12)
    assert m.delta1 >= s.theta * s.c_x**2 * (1 - 1e-12)


@given(summaries)
def test_cauchy_schwarz(s):
    m = derive_moments(s)
    assert m.delta01**2 <= m.delta0 * m.delta1 * (1 + 1e-12)


@given(summaries)
def test_derive_moments_is_deterministic(s):
    assert derive_moments(s) == derive_moments(s)
