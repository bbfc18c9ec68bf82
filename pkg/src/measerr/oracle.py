"""Truncated second-order polynomial algebra in the relative errors (e0, e1).

This module re-derives bias and MSE of every estimator mechanically, straight
from the estimator definitions, without using any of the closed forms. It is
the independent check on the formula modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

from .population import DomainError, PopulationSummary

# monomial exponents (power of e0, power of e1), in coefficient order
MONOMIALS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
_INDEX = {m: i for i, m in enumerate(MONOMIALS)}


@dataclass(frozen=True)
class TruncatedPoly:
    """c0 + c1 e0 + c2 e1 + c3 e0^2 + c4 e0 e1 + c5 e1^2."""

    coeffs: tuple[float, float, float, float, float, float] = (0.0,) * 6

    @classmethod
    def constant(cls, c: float) -> TruncatedPoly:
        return cls((float(c), 0.0, 0.0, 0.0, 0.0, 0.0))

    def __getitem__(self, monomial: tuple[int, int]) -> float:
        return self.coeffs[_INDEX[monomial]]

    def __add__(self, other):
        if isinstance(other, Real):
            other = TruncatedPoly.constant(other)
        return TruncatedPoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedPoly(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return TruncatedPoly(tuple(a * other for a in self.coeffs))
        return poly_mul(self, other)

    __rmul__ = __mul__


E0 = TruncatedPoly((0.0, 1.0, 0.0, 0.0, 0.0, 0.0))
E1 = TruncatedPoly((0.0, 0.0, 1.0, 0.0, 0.0, 0.0))


def poly_mul(a: TruncatedPoly, b: TruncatedPoly) -> TruncatedPoly:
    out = [0.0] * 6
    for (i, j), ca in zip(MONOMIALS, a.coeffs):
        if ca == 0.0:
            continue
        for (k, l), cb in zip(MONOMIALS, b.coeffs):
            if i + j + k + l <= 2:
                out[_INDEX[(i + k, j + l)]] += ca * cb
    return TruncatedPoly(tuple(out))


def poly_pow(p: TruncatedPoly, exponent: float) -> TruncatedPoly:
    """p**exponent by the binomial series about the constant term of p."""
    c = p.coeffs[0]
    if c == 0.0:
        raise DomainError("cannot expand a power of a polynomial with zero constant term")
    if exponent == 0:
        return TruncatedPoly.constant(1.0)
    if c < 0 and not float(exponent).is_integer():
        raise DomainError("non-integer power of a negative constant term")
    z = p * (1.0 / c) - 1.0
    series = 1.0 + exponent * z + exponent * (exponent - 1) / 2 * poly_mul(z, z)
    return series * (c**exponent)


def binomial_series(a: float, exponent: float) -> TruncatedPoly:
    """(1 + a e1)**(-exponent), truncated."""
    return poly_pow(1.0 + a * E1, -exponent)


def sample_means(mu_y: float, mu_x: float) -> tuple[TruncatedPoly, TruncatedPoly]:
    return mu_y * (1.0 + E0), mu_x * (1.0 + E1)


def expand_classical(estimator: str, mu_y: float, mu_x: float, constant: float | None = None) -> TruncatedPoly:
    ybar, xbar = sample_means(mu_y, mu_x)
    if estimator == "usual_mean":
        return ybar
    if estimator == "ratio":
        return ybar * poly_pow(xbar, -1.0) * mu_x
    if constant is None:
        raise DomainError(f"{estimator} needs a constant")
    if estimator == "difference":
        return ybar + constant * (mu_x - xbar)
    if estimator == "srivastava":
        return ybar * poly_pow(xbar * (1.0 / mu_x), -constant)
    if estimator == "walsh":
        return ybar * mu_x * poly_pow(constant * xbar + (1.0 - constant) * mu_x, -1.0)
    if estimator == "ray_sahai":
        return (1.0 - constant) * ybar + constant * ybar * xbar * (1.0 / mu_x)
    raise DomainError(f"unknown estimator {estimator!r}")


def expand_class(
    alpha: float, eta: float, lam: float, alpha1: float, alpha2: float, mu_y: float, mu_x: float
) -> TruncatedPoly:
    """[a1 ybar + a2 x* + (1 - a1 - a2) mu*] (mu*/x*)**alpha with x* = eta xbar + lam."""
    ybar, xbar = sample_means(mu_y, mu_x)
    x_star = eta * xbar + lam
    mu_star = eta * mu_x + lam
    bracket = alpha1 * ybar + alpha2 * x_star + (1.0 - alpha1 - alpha2) * mu_star
    if alpha == 0:
        return bracket
    if mu_star == 0:
        raise DomainError("transformed auxiliary mean is zero")
    return bracket * poly_pow(x_star * (1.0 / mu_star), -alpha)


def expand_estimator(spec, s: PopulationSummary, constant=None, scalars=None) -> TruncatedPoly:
    """Expand an estimator of mu_y as a truncated polynomial in (e0, e1).

    ``spec`` is a classical estimator id (with optional ``constant``) or a
    ClassParams-like object with ``alpha, eta, lam`` (with ``scalars`` giving
    the pair (alpha1, alpha2)).
    """
    if isinstance(spec, str):
        if constant is None and spec in ("difference", "srivastava", "walsh", "ray_sahai"):
            from .srs import classical_optimum

            constant = classical_optimum(spec, s)
        return expand_classical(spec, s.mu_y, s.mu_x, constant)
    if scalars is None:
        raise DomainError("class estimator expansion needs (alpha1, alpha2)")
    a1, a2 = scalars
    return expand_class(spec.alpha, spec.eta, spec.lam, a1, a2, s.mu_y, s.mu_x)


def expected_value(p: TruncatedPoly, m) -> float:
    """E[p] given moments ``m`` with attributes delta0, delta1, delta01."""
    c = p.coeffs
    return c[0] + c[3] * m.delta0 + c[4] * m.delta01 + c[5] * m.delta1


def expected_square(deviation: TruncatedPoly, m) -> float:
    return expected_value(poly_mul(deviation, deviation), m)


@dataclass(frozen=True)
class Quadratic:
    """MSE = a1^2 q1 + a2^2 q2 - 2 a1 q3 - 2 a2 q4 + 2 a1 a2 q5 + q0."""

    q1: float
    q2: float
    q3: float
    q4: float
    q5: float
    q0: float


def class_quadratic(alpha, eta, lam, mu_y, mu_x, m) -> Quadratic:
    """MSE quadratic in (alpha1, alpha2) from expansions at (0,0), (1,0), (0,1).

    The deviation is affine in the scalars, so three polynomial evaluations pin
    it down; the (1,1) evaluation confirms affinity.
    """
    dev = lambda a1, a2: expand_class(alpha, eta, lam, a1, a2, mu_y, mu_x) - mu_y  # noqa: E731
    d0 = dev(0.0, 0.0)
    d1 = dev(1.0, 0.0) - d0
    d2 = dev(0.0, 1.0) - d0
    check = dev(1.0, 1.0) - (d0 + d1 + d2)
    scale = max(abs(c) for c in d0.coeffs + d1.coeffs + d2.coeffs) or 1.0
    if max(abs(c) for c in check.coeffs) > 1e-9 * scale:
        raise AssertionError("class deviation is not affine in (alpha1, alpha2)")
    e = lambda a, b: expected_value(poly_mul(a, b), m)  # noqa: E731
    return Quadratic(q1=e(d1, d1), q2=e(d2, d2), q3=-e(d0, d1), q4=-e(d0, d2), q5=e(d1, d2), q0=e(d0, d0))
