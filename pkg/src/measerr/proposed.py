"""Difference-type class of estimators

    t_p = [a1 ybar + a2 x* + (1 - a1 - a2) mu*] (mu* / x*)**alpha,
    x* = eta xbar + lam,  mu* = eta mu_x + lam,

with closed-form first-order MSE decomposition and optimum (a1, a2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .population import DomainError, PopulationSummary, derive_moments, validate_summary
from .srs import SampleStats, classical_optimum

FORMS = ("printed", "derived")
SINGULAR_RTOL = 1e-14


@dataclass(frozen=True)
class ClassParams:
    alpha: float
    eta: float = 1.0
    lam: float = 0.0


@dataclass(frozen=True)
class ClassContext:
    a: float
    b: float
    c: float
    mu_x_star: float


@dataclass(frozen=True)
class CentredDeviation:
    """Deviation t - mu_y written around alpha1 = 1, so no C**2 terms cancel."""

    c: float
    alpha_a: float
    b: float
    mu_x_star: float
    eta_mu_x: float
    mu_y: float
    delta0: float
    delta1: float
    delta01: float
    offset: float = 0.0  # printed minus derived constant term

    def mse(self, alpha1: float, alpha2: float) -> float:
        k0 = (alpha1 - 1.0) * self.c
        lead = self.mu_x_star + alpha1 * self.c
        k_e0 = alpha1 * self.mu_y
        k_e1 = alpha2 * self.eta_mu_x - self.alpha_a * lead
        k_e11 = self.b * lead - alpha2 * self.eta_mu_x * self.alpha_a
        k_e01 = -alpha1 * self.alpha_a * self.mu_y
        return (
            k0**2
            + 2 * k0 * (k_e01 * self.delta01 + k_e11 * self.delta1)
            + k_e0**2 * self.delta0
            + 2 * k_e0 * k_e1 * self.delta01
            + k_e1**2 * self.delta1
            + self.offset
        )


@dataclass(frozen=True)
class MseDecomposition:
    phi1: float
    phi2: float
    phi3: float
    phi4: float
    phi5: float
    phi: float
    centred: CentredDeviation | None = field(default=None, compare=False, repr=False)

    def mse(self, alpha1: float, alpha2: float) -> float:
        if self.centred is not None:
            return self.centred.mse(alpha1, alpha2)
        return (
            alpha1**2 * self.phi1
            + alpha2**2 * self.phi2
            - 2 * alpha1 * self.phi3
            - 2 * alpha2 * self.phi4
            + 2 * alpha1 * alpha2 * self.phi5
            + self.phi
        )

    def stationarity_residual(self, alpha1: float, alpha2: float) -> tuple[float, float]:
        return (
            self.phi1 * alpha1 + self.phi5 * alpha2 - self.phi3,
            self.phi2 * alpha2 + self.phi5 * alpha1 - self.phi4,
        )


@dataclass(frozen=True)
class OptimalScalars:
    alpha1: float
    alpha2: float

    def __iter__(self):
        return iter((self.alpha1, self.alpha2))


def context_from_means(p: ClassParams, mu_y: float, mu_x: float) -> ClassContext:
    mu_x_star = p.eta * mu_x + p.lam
    if mu_x_star == 0:
        if p.alpha != 0:
            raise DomainError("degenerate shift: eta*mu_x + lambda = 0")
        # (mu*/x*)**0 == 1 identically, so A never enters
        a = 0.0
    else:
        a = p.eta * mu_x / mu_x_star
    return ClassContext(a=a, b=p.alpha * (p.alpha + 1) / 2 * a**2, c=mu_y - mu_x_star, mu_x_star=mu_x_star)


def build_context(p: ClassParams, s: PopulationSummary) -> ClassContext:
    validate_summary(s)
    return context_from_means(p, s.mu_y, s.mu_x)


def decompose(p: ClassParams, mu_y, mu_x, delta0, delta1, delta01, form: str = "printed") -> MseDecomposition:
    """Coefficients of the MSE quadratic for given means and error moments.

    ``form="printed"`` keeps the constant term with mu_x**2 as tabulated for
    the consumption/income example; ``form="derived"`` uses mu_x***2, which is
    what the second-order expansion produces.
    """
    if form not in FORMS:
        raise DomainError(f"unknown form {form!r}; expected one of {FORMS}")
    ctx = context_from_means(p, mu_y, mu_x)
    al, eta = p.alpha, p.eta
    A, B, C, ms = ctx.a, ctx.b, ctx.c, ctx.mu_x_star
    d0, d1, d01 = delta0, delta1, delta01
    phi1 = C**2 + mu_y**2 * d0 + d1 * (al**2 * A**2 * C**2 + 2 * B * C**2) - 4 * al * A * C * mu_y * d01
    phi2 = eta**2 * mu_x**2 * d1
    phi3 = C**2 + d1 * (B * C**2 - B * C * ms - al**2 * A**2 * C * ms) + d01 * al * A * mu_y * (ms - C)
    phi4 = eta * mu_x * al * A * d1 * (ms - C)
    phi5 = eta * mu_x * (mu_y * d01 - 2 * A * al * C * d1)
    lead = mu_x if form == "printed" else ms
    phi = C**2 + d1 * (al**2 * A**2 * lead**2 - 2 * B * C * ms)
    offset = d1 * al**2 * A**2 * (mu_x**2 - ms**2) if form == "printed" else 0.0
    centred = CentredDeviation(C, al * A, B, ms, eta * mu_x, mu_y, d0, d1, d01, offset)
    return MseDecomposition(phi1, phi2, phi3, phi4, phi5, phi, centred)


def mse_decomposition(p: ClassParams, s: PopulationSummary, form: str = "printed") -> MseDecomposition:
    m = derive_moments(s)
    return decompose(p, s.mu_y, s.mu_x, m.delta0, m.delta1, m.delta01, form)


def optimal_scalars(
    d: MseDecomposition, alpha1: float | None = None, alpha2: float | None = None
) -> OptimalScalars:
    """Minimiser of the MSE quadratic; pass ``alpha1``/``alpha2`` to hold one fixed."""
    if alpha1 is not None and alpha2 is not None:
        return OptimalScalars(alpha1, alpha2)
    if alpha1 is not None:
        if d.phi2 == 0:
            raise DomainError("degenerate MSE quadratic")
        return OptimalScalars(alpha1, (d.phi4 - alpha1 * d.phi5) / d.phi2)
    if alpha2 is not None:
        if d.phi1 == 0:
            raise DomainError("degenerate MSE quadratic")
        return OptimalScalars((d.phi3 - alpha2 * d.phi5) / d.phi1, alpha2)
    det = d.phi1 * d.phi2 - d.phi5**2
    if abs(det) <= SINGULAR_RTOL * max(abs(d.phi1 * d.phi2), d.phi5**2):
        raise DomainError("degenerate MSE quadratic")
    return OptimalScalars(
        (d.phi2 * d.phi3 - d.phi4 * d.phi5) / det,
        (d.phi1 * d.phi4 - d.phi3 * d.phi5) / det,
    )


def min_mse(p: ClassParams, s: PopulationSummary, form: str = "printed") -> float:
    d = mse_decomposition(p, s, form)
    return d.mse(*optimal_scalars(d))


def bias_from_moments(p: ClassParams, scalars, mu_y, mu_x, delta1, delta01, form: str = "printed") -> float:
    if form not in FORMS:
        raise DomainError(f"unknown form {form!r}; expected one of {FORMS}")
    ctx = context_from_means(p, mu_y, mu_x)
    a1, a2 = scalars
    A, B, C, ms = ctx.a, ctx.b, ctx.c, ctx.mu_x_star
    al = p.alpha
    bias = (
        B * ms * delta1
        + a1 * (B * C * delta1 - al * A * mu_y * delta01)
        - a2 * p.eta * mu_x * A * al * delta1
    )
    if form == "derived":
        # zeroth-order offset: E[t] - mu_y carries (alpha1 - 1) * C even without sampling error
        bias += (a1 - 1) * C
    return bias


def bias_tp(p: ClassParams, scalars, s: PopulationSummary, form: str = "printed") -> float:
    """First-order bias at the given (alpha1, alpha2).

    The printed form drops the constant offset (alpha1 - 1) * (mu_y - mu*),
    which is zero only when alpha1 = 1; ``form="derived"`` restores it.
    """
    m = derive_moments(s)
    return bias_from_moments(p, scalars, s.mu_y, s.mu_x, m.delta1, m.delta01, form)


@dataclass(frozen=True)
class Member:
    """A named member of the class; ``None`` scalars are set by optimisation."""

    name: str
    label: str
    params: ClassParams
    alpha1: float | None = None
    alpha2: float | None = None
    group: str = "new"
    rule: str = ""

    def scalars(self, d: MseDecomposition) -> OptimalScalars:
        return optimal_scalars(d, self.alpha1, self.alpha2)


def member_catalog(s: PopulationSummary) -> list[Member]:
    """Known estimators expressed as members, then the new members t1..t7."""
    validate_summary(s)
    ell1 = classical_optimum("srivastava", s)
    return [
        Member("usual_mean", "usual unbiased", ClassParams(0.0, 1.0, 0.0), 1.0, 0.0, "known", "eta, lambda unused"),
        Member("ratio", "usual ratio", ClassParams(1.0, 1.0, 0.0), 1.0, 0.0, "known"),
        Member("difference", "usual difference", ClassParams(0.0, -1.0, s.mu_x), 1.0, None, "known", "lambda = mu_x"),
        Member("srivastava", "Srivastava (1967)", ClassParams(ell1, 1.0, 0.0), 1.0, 0.0, "known", "alpha = optimum l1"),
        Member("dubey_singh", "Dubey and Singh", ClassParams(0.0, 1.0, 0.0), None, None, "known"),
        Member("t1", "t1", ClassParams(-1.0, 1.0, 0.0)),
        Member("t2", "t2", ClassParams(1.0, 1.0, 1.0)),
        Member("t3", "t3", ClassParams(-1.0, 1.0, 1.0)),
        Member("t4", "t4", ClassParams(-1.0, 1.0, s.rho), rule="lambda = rho"),
        Member("t5", "t5", ClassParams(-1.0, 1.0, s.c_x), rule="lambda = C_x"),
        Member("t6", "t6", ClassParams(-1.0, 1.0, -s.c_x), rule="lambda = -C_x"),
        Member("t7", "t7", ClassParams(-1.0, -1.0, -1.0)),
    ]


def class_values(p: ClassParams, scalars, ybar, xbar, mu_x: float):
    """Vectorised class estimates; invalid transformed means give NaN."""
    a1, a2 = scalars
    ybar = np.asarray(ybar, dtype=float)
    xbar = np.asarray(xbar, dtype=float)
    x_star = p.eta * xbar + p.lam
    mu_star = p.eta * mu_x + p.lam
    bracket = a1 * ybar + a2 * x_star + (1 - a1 - a2) * mu_star
    if p.alpha == 0:
        return bracket
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.where(x_star != 0, mu_star / x_star, np.nan)
        if float(p.alpha).is_integer():
            return bracket * ratio**p.alpha
        return np.where(ratio > 0, bracket * np.abs(ratio) ** p.alpha, np.nan)


def point_estimate_tp(p: ClassParams, scalars, st: SampleStats, s: PopulationSummary) -> float:
    validate_summary(s)
    if p.alpha != 0:
        x_star = p.eta * st.xbar + p.lam
        mu_star = p.eta * s.mu_x + p.lam
        if x_star == 0:
            raise DomainError("transformed sample auxiliary mean is zero")
        if mu_star == 0:
            raise DomainError("degenerate shift: eta*mu_x + lambda = 0")
        if not float(p.alpha).is_integer() and mu_star / x_star <= 0:
            raise DomainError("non-integer power of a non-positive ratio mu*/x*")
    value = float(class_values(p, scalars, st.ybar, st.xbar, s.mu_x))
    if not math.isfinite(value):
        raise DomainError("class estimate is not finite")
    return value
