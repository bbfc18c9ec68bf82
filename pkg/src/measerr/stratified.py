"""Stratified random sampling: combined classical estimators and the stratified class."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Integral

import numpy as np

from .population import DomainError, PopulationSummary, _finite, derive_moments, validate_summary
from .proposed import (
    ClassParams,
    Member,
    OptimalScalars,
    bias_from_moments,
    class_values,
    decompose,
    optimal_scalars,
)

STRATIFIED_CLASSICAL = ("usual_mean", "combined_ratio", "combined_product", "combined_difference")
WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class StratumSummary:
    w: float
    n_h: int
    mu_yh: float
    mu_xh: float
    sigma2_yh: float
    sigma2_xh: float
    rho_h: float
    sigma2_uh: float = 0.0
    sigma2_vh: float = 0.0
    name: str | None = None

    def as_population(self) -> PopulationSummary:
        return PopulationSummary(
            self.mu_yh, self.mu_xh, self.sigma2_yh, self.sigma2_xh, self.rho_h,
            self.sigma2_uh, self.sigma2_vh, self.n_h,
        )

    def to_dict(self) -> dict:
        out = {
            "w": self.w,
            "n_h": self.n_h,
            "mu_yh": self.mu_yh,
            "mu_xh": self.mu_xh,
            "sigma2_yh": self.sigma2_yh,
            "sigma2_xh": self.sigma2_xh,
            "rho_h": self.rho_h,
            "sigma2_uh": self.sigma2_uh,
            "sigma2_vh": self.sigma2_vh,
        }
        if self.name is not None:
            out["name"] = self.name
        return out


@dataclass(frozen=True)
class StratumMoments:
    nabla0: float
    nabla1: float
    nabla01: float
    theta_yh: float
    theta_xh: float
    beta_yxh: float


@dataclass(frozen=True)
class AggregateMoments:
    """Relative-error moments of (ybar_st, xbar_st) about (mu_Y, mu_X)."""

    delta0: float
    delta1: float
    delta01: float


@dataclass(frozen=True)
class StratifiedDesign:
    strata: tuple[StratumSummary, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(self.strata))

    @property
    def weights(self) -> np.ndarray:
        return np.array([h.w for h in self.strata])

    @property
    def mu_y(self) -> float:
        return math.fsum(h.w * h.mu_yh for h in self.strata)

    @property
    def mu_x(self) -> float:
        return math.fsum(h.w * h.mu_xh for h in self.strata)

    @property
    def ratio(self) -> float:
        return self.mu_y / self.mu_x

    def labels(self) -> list[str]:
        return [h.name if h.name is not None else str(i + 1) for i, h in enumerate(self.strata)]

    def population_rho_cx(self) -> tuple[float, float]:
        """Correlation and C_x of the pooled (X, Y) population across strata."""
        mu_y, mu_x = self.mu_y, self.mu_x
        var_x = sum(h.w * (h.sigma2_xh + (h.mu_xh - mu_x) ** 2) for h in self.strata)
        var_y = sum(h.w * (h.sigma2_yh + (h.mu_yh - mu_y) ** 2) for h in self.strata)
        cov = sum(
            h.w * (h.rho_h * math.sqrt(h.sigma2_yh * h.sigma2_xh) + (h.mu_yh - mu_y) * (h.mu_xh - mu_x))
            for h in self.strata
        )
        return cov / math.sqrt(var_x * var_y), math.sqrt(var_x) / mu_x


def validate_design(d: StratifiedDesign) -> StratifiedDesign:
    if not d.strata:
        raise DomainError("strata: at least one stratum is required")
    for i, h in enumerate(d.strata):
        _finite(f"strata[{i}].w", h.w)
        if not 0 < h.w <= 1:
            raise DomainError(f"strata[{i}].w: stratum weight must lie in (0, 1], got {h.w}")
        if isinstance(h.n_h, bool) or not isinstance(h.n_h, Integral):
            raise DomainError(f"strata[{i}].n_h: sample size must be an integer")
        try:
            validate_summary(h.as_population())
        except DomainError as exc:
            raise DomainError(f"strata[{i}]: {exc}") from None
    total = math.fsum(h.w for h in d.strata)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise DomainError(f"stratum weights must sum to 1, got {total!r}")
    if d.mu_y == 0 or d.mu_x == 0:
        raise DomainError("design means mu_Y and mu_X must be nonzero")
    return d


def derive_stratum_moments(h: StratumSummary) -> StratumMoments:
    m = derive_moments(h.as_population())
    theta_y = h.sigma2_yh / (h.sigma2_uh + h.sigma2_yh)
    theta_x = h.sigma2_xh / (h.sigma2_vh + h.sigma2_xh)
    return StratumMoments(
        nabla0=m.delta0,
        nabla1=m.delta1,
        nabla01=m.delta01,
        theta_yh=theta_y,
        theta_xh=theta_x,
        beta_yxh=h.rho_h * math.sqrt(h.sigma2_yh / h.sigma2_xh),
    )


def aggregate_moments(d: StratifiedDesign) -> AggregateMoments:
    """Combine stratum moments with W_h^2 weights, rescaled to the design means."""
    validate_design(d)
    mu_y, mu_x = d.mu_y, d.mu_x
    s0 = s1 = s01 = 0.0
    for h in d.strata:
        m = derive_stratum_moments(h)
        # relative weights are exactly 1 for a single stratum
        ry, rx = h.w * h.mu_yh / mu_y, h.w * h.mu_xh / mu_x
        s0 += ry**2 * m.nabla0
        s1 += rx**2 * m.nabla1
        s01 += ry * rx * m.nabla01
    return AggregateMoments(s0, s1, s01)


def _sums(d: StratifiedDesign) -> tuple[float, float, float]:
    """sum W^2/n sigma_Y^2/theta_Y, sum W^2/n sigma_X^2/theta_X, sum W^2/n beta sigma_X^2."""
    sy = sx = sxy = 0.0
    for h in d.strata:
        m = derive_stratum_moments(h)
        f = h.w**2 / h.n_h
        sy += f * h.sigma2_yh / m.theta_yh
        sx += f * h.sigma2_xh / m.theta_xh
        sxy += f * m.beta_yxh * h.sigma2_xh
    return sy, sx, sxy


def d_opt(d: StratifiedDesign) -> float:
    validate_design(d)
    _, sx, sxy = _sums(d)
    if sx <= 0:
        raise DomainError("zero denominator in the optimum difference constant")
    return sxy / sx


def stratified_classical_mse(estimator: str, d: StratifiedDesign, constant: float | None = None) -> float:
    if estimator not in STRATIFIED_CLASSICAL:
        raise DomainError(f"unknown stratified estimator {estimator!r}")
    validate_design(d)
    r = d.ratio
    if estimator == "combined_difference":
        sy, sx, sxy = _sums(d)
        k = d_opt(d) if constant is None else constant
        return sy + k**2 * sx - 2 * k * sxy
    total = 0.0
    for h in d.strata:
        m = derive_stratum_moments(h)
        f = h.w**2 / h.n_h
        vy = h.sigma2_yh / m.theta_yh
        vx = h.sigma2_xh / m.theta_xh
        if estimator == "usual_mean":
            total += f * vy
        elif estimator == "combined_ratio":
            total += f * (vy + r * vx * (r - 2 * m.beta_yxh * m.theta_xh))
        else:
            total += f * (vy + r * vx * (r + 2 * m.beta_yxh * m.theta_xh))
    return total


def stratified_classical_values(estimator: str, ybar_st, xbar_st, d: StratifiedDesign, constant=None):
    ybar_st = np.asarray(ybar_st, dtype=float)
    xbar_st = np.asarray(xbar_st, dtype=float)
    mu_x = d.mu_x
    with np.errstate(divide="ignore", invalid="ignore"):
        if estimator == "usual_mean":
            return ybar_st * 1.0
        if estimator == "combined_ratio":
            return np.where(xbar_st != 0, ybar_st * mu_x / xbar_st, np.nan)
        if estimator == "combined_product":
            return ybar_st * xbar_st / mu_x
        if estimator == "combined_difference":
            k = d_opt(d) if constant is None else constant
            return ybar_st + k * (mu_x - xbar_st)
    raise DomainError(f"unknown stratified estimator {estimator!r}")


@dataclass(frozen=True)
class StratifiedClassResult:
    chi1: float
    chi2: float
    chi3: float
    chi4: float
    chi5: float
    chi: float
    beta1: float
    beta2: float
    min_mse: float
    bias: float


def stratified_class_mse(
    p: ClassParams,
    d: StratifiedDesign,
    form: str = "printed",
    beta1: float | None = None,
    beta2: float | None = None,
) -> StratifiedClassResult:
    """Chi coefficients, optimum (beta1, beta2), minimum MSE and bias of T_p.

    ``p.alpha`` plays the role of the exponent beta. Either scalar may be held
    fixed; the other (or both) is optimised.
    """
    m = aggregate_moments(d)
    mu_y, mu_x = d.mu_y, d.mu_x
    dec = decompose(p, mu_y, mu_x, m.delta0, m.delta1, m.delta01, form)
    sc: OptimalScalars = optimal_scalars(dec, beta1, beta2)
    return StratifiedClassResult(
        dec.phi1, dec.phi2, dec.phi3, dec.phi4, dec.phi5, dec.phi,
        sc.alpha1, sc.alpha2, dec.mse(*sc),
        bias_from_moments(p, sc, mu_y, mu_x, m.delta1, m.delta01, form),
    )


def stratified_member_catalog(d: StratifiedDesign) -> list[Member]:
    """Known combined estimators as members, then stratified analogues of t1..t7."""
    validate_design(d)
    rho, c_x = d.population_rho_cx()
    return [
        Member("usual_mean", "usual unbiased", ClassParams(0.0, 1.0, 0.0), 1.0, 0.0, "known", "eta, lambda unused"),
        Member("combined_ratio", "usual ratio", ClassParams(1.0, 1.0, 0.0), 1.0, 0.0, "known"),
        Member("combined_product", "usual product", ClassParams(-1.0, 1.0, 0.0), 1.0, 0.0, "known"),
        Member("combined_difference", "usual difference", ClassParams(0.0, -1.0, d.mu_x), 1.0, None, "known", "lambda = mu_x"),
        Member("t1", "T1", ClassParams(-1.0, 1.0, 0.0)),
        Member("t2", "T2", ClassParams(1.0, 1.0, 1.0)),
        Member("t3", "T3", ClassParams(-1.0, 1.0, 1.0)),
        Member("t4", "T4", ClassParams(-1.0, 1.0, rho), rule="lambda = rho (pooled)"),
        Member("t5", "T5", ClassParams(-1.0, 1.0, c_x), rule="lambda = C_x (pooled)"),
        Member("t6", "T6", ClassParams(-1.0, 1.0, -c_x), rule="lambda = -C_x (pooled)"),
        Member("t7", "T7", ClassParams(-1.0, -1.0, -1.0)),
    ]


def stratified_class_values(p: ClassParams, scalars, ybar_st, xbar_st, d: StratifiedDesign):
    return class_values(p, scalars, ybar_st, xbar_st, d.mu_x)


def single_stratum(s: PopulationSummary) -> StratifiedDesign:
    return StratifiedDesign((StratumSummary(
        1.0, s.n, s.mu_y, s.mu_x, s.sigma2_y, s.sigma2_x, s.rho, s.sigma2_u, s.sigma2_v,
    ),))
