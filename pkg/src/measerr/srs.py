"""Classical estimators of the mean under measurement error (simple random sampling).

Every MSE and bias is first order: expectation terms of total degree above two
in the relative errors are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .population import DomainError, PopulationSummary, derive_moments, validate_summary

CLASSICAL_ESTIMATORS = ("usual_mean", "ratio", "difference", "srivastava", "walsh", "ray_sahai")
TUNABLE = ("difference", "srivastava", "walsh", "ray_sahai")


@dataclass(frozen=True)
class SampleStats:
    ybar: float
    xbar: float
    n: int


@dataclass(frozen=True)
class EstimatorReport:
    id: str
    optimum_constant: float | None
    bias: float | None
    mse: float
    pre: float


def _check_id(estimator: str) -> None:
    if estimator not in CLASSICAL_ESTIMATORS:
        raise DomainError(f"unknown estimator {estimator!r}")


def classical_optimum(estimator: str, s: PopulationSummary) -> float:
    """Optimum constant k, l1, l2 or l3 of a tunable classical estimator."""
    _check_id(estimator)
    if estimator not in TUNABLE:
        raise DomainError(f"{estimator} has no tunable constant")
    validate_summary(s)
    slope = s.rho * s.c_y / (s.inflation_x * s.c_x)
    if estimator == "difference":
        return s.mu_y * slope / s.mu_x
    if estimator == "ray_sahai":
        return -slope
    return slope


def _constant(estimator: str, s: PopulationSummary, constant: float | None) -> float | None:
    if estimator not in TUNABLE:
        return None
    return classical_optimum(estimator, s) if constant is None else constant


def classical_mse(estimator: str, s: PopulationSummary, constant: float | None = None) -> float:
    """First-order MSE.

    With ``constant=None`` a tunable estimator gets its minimum MSE (the value
    at the optimum constant); otherwise the MSE at the given constant.
    """
    _check_id(estimator)
    validate_summary(s)
    m = derive_moments(s)
    mu_y = s.mu_y
    if estimator == "usual_mean":
        return s.theta * mu_y**2 * s.inflation_y * s.c_y**2
    if estimator == "ratio":
        return s.theta * mu_y**2 * (
            s.inflation_y * s.c_y**2 + s.inflation_x * s.c_x**2 - 2 * s.rho * s.c_y * s.c_x
        )
    if constant is None:
        # shared minimum of the difference, Srivastava, Walsh and Ray-Sahai forms
        return mu_y**2 * s.theta * s.inflation_y * s.c_y**2 * (
            1 - s.rho**2 / (s.inflation_y * s.inflation_x)
        )
    if estimator == "difference":
        k = constant
        return mu_y**2 * m.delta0 - 2 * k * mu_y * s.mu_x * m.delta01 + k**2 * s.mu_x**2 * m.delta1
    sign = 1.0 if estimator == "ray_sahai" else -1.0
    return mu_y**2 * (m.delta0 + 2 * sign * constant * m.delta01 + constant**2 * m.delta1)


def classical_bias(estimator: str, s: PopulationSummary, constant: float | None = None) -> float:
    _check_id(estimator)
    if estimator == "usual_mean":
        raise DomainError("usual_mean is unbiased; bias is not tabulated")
    validate_summary(s)
    th, mu_y = s.theta, s.mu_y
    if estimator == "ratio":
        return th * mu_y * (s.inflation_x * s.c_x**2 - s.rho * s.c_y * s.c_x)
    c = _constant(estimator, s, constant)
    if estimator == "difference":
        return 0.0
    if estimator == "srivastava":
        return mu_y * (c * (c + 1) / 2 * th * s.inflation_x * s.c_x**2 - c * th * s.rho * s.c_y * s.c_x)
    if estimator == "walsh":
        return mu_y * th * (c**2 * s.c_x**2 * s.inflation_x - c * s.rho * s.c_y * s.c_x)
    return th * c * mu_y * s.rho * s.c_y * s.c_x


def estimator_values(estimator: str, ybar, xbar, s: PopulationSummary, constant: float | None = None):
    """Vectorised point estimates; invalid denominators or powers give NaN."""
    _check_id(estimator)
    ybar = np.asarray(ybar, dtype=float)
    xbar = np.asarray(xbar, dtype=float)
    c = _constant(estimator, s, constant)
    mu_x = s.mu_x
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if estimator == "usual_mean":
            out = ybar.copy() if ybar.ndim else ybar * 1.0
        elif estimator == "ratio":
            out = np.where(xbar != 0, ybar * mu_x / xbar, np.nan)
        elif estimator == "difference":
            out = ybar + c * (mu_x - xbar)
        elif estimator == "srivastava":
            base = np.where(xbar != 0, mu_x / xbar, np.nan)
            if float(c).is_integer():
                out = ybar * base**c
            else:
                out = np.where(base > 0, ybar * np.abs(base) ** c, np.nan)
        elif estimator == "walsh":
            den = c * xbar + (1 - c) * mu_x
            out = np.where(den != 0, ybar * mu_x / den, np.nan)
        else:
            out = (1 - c) * ybar + c * ybar * (xbar / mu_x)
    return out


def point_estimate(
    estimator: str, st: SampleStats, s: PopulationSummary, constant: float | None = None
) -> float:
    """Estimate of mu_y from observed (error-contaminated) sample means."""
    _check_id(estimator)
    validate_summary(s)
    c = _constant(estimator, s, constant)
    if estimator in ("ratio", "srivastava") and st.xbar == 0:
        raise DomainError(f"{estimator}: sample auxiliary mean is zero")
    if estimator == "srivastava" and not float(c).is_integer() and s.mu_x / st.xbar <= 0:
        raise DomainError("srivastava: non-integer power of a non-positive base")
    if estimator == "walsh" and c * st.xbar + (1 - c) * s.mu_x == 0:
        raise DomainError("walsh: denominator l2*xbar + (1 - l2)*mu_x is zero")
    return float(estimator_values(estimator, st.ybar, st.xbar, s, constant))


def pre(mse: float, var_mean: float) -> float:
    """Percent relative efficiency against the sample mean."""
    if not mse > 0:
        raise DomainError(f"mse must be positive, got {mse}")
    return 100.0 * var_mean / mse


def classical_report(estimator: str, s: PopulationSummary) -> EstimatorReport:
    mse = classical_mse(estimator, s)
    return EstimatorReport(
        id=estimator,
        optimum_constant=classical_optimum(estimator, s) if estimator in TUNABLE else None,
        bias=0.0 if estimator == "usual_mean" else classical_bias(estimator, s),
        mse=mse,
        pre=pre(mse, classical_mse("usual_mean", s)),
    )
