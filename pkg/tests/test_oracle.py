import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from measerr import ClassParams, classical_bias, classical_mse, classical_optimum, derive_moments
from measerr.oracle import (
    E0,
    E1,
    TruncatedPoly,
    binomial_series,
    expand_estimator,
    expected_square,
    expected_value,
    poly_mul,
)
from measerr.population import DomainError
from measerr.srs import CLASSICAL_ESTIMATORS

from .conftest import random_summary, summaries

coef = st.floats(-100, 100)
polys = st.tuples(*[coef] * 6).map(TruncatedPoly)
linear = st.tuples(coef, coef, coef).map(lambda c: TruncatedPoly(c + (0.0, 0.0, 0.0)))


def test_degree_two_product_kept():
    assert poly_mul(E0, E1) == TruncatedPoly((0, 0, 0, 0, 1.0, 0))


def test_degree_three_product_dropped():
    assert poly_mul(poly_mul(E0, E1), E1) == TruncatedPoly()


def test_geometric_identity():
    assert poly_mul(1.0 + E1, 1.0 - E1 + poly_mul(E1, E1)) == TruncatedPoly.constant(1.0)


def test_binomial_series_geometric():
    assert binomial_series(1.0, 1.0) == 1.0 - E1 + poly_mul(E1, E1)


@pytest.mark.parametrize("alpha", [-1.0, 0.5, 2.0, 3.7])
def test_binomial_series_second_coefficient(alpha):
    a = 0.8
    p = binomial_series(a, alpha)
    assert p[(0, 1)] == pytest.approx(-alpha * a)
    assert p[(0, 2)] == pytest.approx(alpha * (alpha + 1) / 2 * a**2)


def test_binomial_series_zero_exponent():
    assert binomial_series(0.3, 0.0) == TruncatedPoly.constant(1.0)


def test_usual_mean_expansion(s4):
    assert expand_estimator("usual_mean", s4) == s4.mu_y + s4.mu_y * E0


def test_ratio_expansion(s4):
    p = expand_estimator("ratio", s4)
    expected = s4.mu_y * (1.0 + E0 - E1 - poly_mul(E0, E1) + poly_mul(E1, E1))
    np.testing.assert_allclose(p.coeffs, expected.coeffs, rtol=1e-14, atol=1e-12)


def test_class_expansion_matches_closed_expansion(s4):
    # mu* - aA mu* e1 + B mu* e1^2 + a1{C - aAC e1 + BC e1^2 + mu_y e0 - aA mu_y e0e1} + a2 eta mu_x{e1 - aA e1^2}
    p = ClassParams(-1.0, 1.0, 1.0)
    a1, a2 = 0.7, -0.4
    ms = p.eta * s4.mu_x + p.lam
    A = p.eta * s4.mu_x / ms
    B = p.alpha * (p.alpha + 1) / 2 * A**2
    C = s4.mu_y - ms
    al = p.alpha
    e11 = poly_mul(E1, E1)
    e01 = poly_mul(E0, E1)
    expected = (
        ms - al * A * ms * E1 + B * ms * e11
        + a1 * (C - al * A * C * E1 + B * C * e11 + s4.mu_y * E0 - al * A * s4.mu_y * e01)
        + a2 * p.eta * s4.mu_x * (E1 - al * A * e11)
    )
    got = expand_estimator(p, s4, scalars=(a1, a2))
    np.testing.assert_allclose(got.coeffs, expected.coeffs, rtol=1e-12, atol=1e-9)


def test_zero_denominator_rejected(s4):
    with pytest.raises(DomainError):
        expand_estimator(ClassParams(1.0, 1.0, -s4.mu_x), s4, scalars=(1.0, 0.0))


def test_expected_value_of_cross_term(s4):
    m = derive_moments(s4)
    assert expected_value(poly_mul(E0, E1), m) == m.delta01
    assert expected_value(E0, m) == 0.0


def test_ratio_bias_and_mse_via_expansion(s4):
    m = derive_moments(s4)
    dev = expand_estimator("ratio", s4) - s4.mu_y
    assert expected_value(dev, m) == pytest.approx(classical_bias("ratio", s4), rel=1e-12)
    assert expected_square(dev, m) == pytest.approx(21.7906, rel=1e-5)


def test_usual_mean_square(s4):
    dev = expand_estimator("usual_mean", s4) - s4.mu_y
    assert expected_square(dev, derive_moments(s4)) == pytest.approx(131.4, rel=1e-12)


def test_collapsed_class_square(s4):
    dev = expand_estimator(ClassParams(0.0, 1.0, 0.0), s4, scalars=(1.0, 0.0)) - s4.mu_y
    assert expected_square(dev, derive_moments(s4)) == pytest.approx(131.4, rel=1e-12)


@given(polys, polys, st.floats(-10, 10), summaries)
def test_expectation_is_linear(p, q, a, s):
    m = derive_moments(s)
    lhs = expected_value(a * p + q, m)
    rhs = a * expected_value(p, m) + expected_value(q, m)
    scale = sum(abs(c) for c in p.coeffs) * (abs(a) + 1) + sum(abs(c) for c in q.coeffs) + 1
    assert lhs == pytest.approx(rhs, abs=1e-12 * scale)


@given(linear, linear, linear)
def test_product_associative_on_linear_inputs(a, b, c):
    lhs = poly_mul(poly_mul(a, b), c)
    rhs = poly_mul(a, poly_mul(b, c))
    np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, rtol=1e-9, atol=1e-6)


def test_classical_closed_forms_match_expansion():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        s = random_summary(rng)
        m = derive_moments(s)
        for e in CLASSICAL_ESTIMATORS:
            c = classical_optimum(e, s) if e not in ("usual_mean", "ratio") else None
            dev = expand_estimator(e, s, constant=c) - s.mu_y
            assert expected_square(dev, m) == pytest.approx(classical_mse(e, s), rel=1e-9)
            if e != "usual_mean":
                scale = abs(s.mu_y)  # constant terms cancel to within an ulp of mu_y
                assert expected_value(dev, m) == pytest.approx(classical_bias(e, s), rel=1e-9, abs=1e-12 * scale)
