"""Population parameters and first-order moments of the relative sampling errors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Integral


class DomainError(ValueError):
    """Raised when inputs violate a model constraint."""


@dataclass(frozen=True)
class PopulationSummary:
    """Known population parameters of (y, x) plus measurement-error variances.

    ``sigma2_u`` and ``sigma2_v`` are the error variances added to the study
    and auxiliary variable respectively; ``n`` is the sample size.
    """

    mu_y: float
    mu_x: float
    sigma2_y: float
    sigma2_x: float
    rho: float
    sigma2_u: float = 0.0
    sigma2_v: float = 0.0
    n: int = 2

    @property
    def theta(self) -> float:
        return 1.0 / self.n

    @property
    def c_y(self) -> float:
        return math.sqrt(self.sigma2_y) / self.mu_y

    @property
    def c_x(self) -> float:
        return math.sqrt(self.sigma2_x) / self.mu_x

    @property
    def inflation_y(self) -> float:
        """Variance inflation of y caused by measurement error."""
        return 1.0 + self.sigma2_u / self.sigma2_y

    @property
    def inflation_x(self) -> float:
        return 1.0 + self.sigma2_v / self.sigma2_x

    def with_n(self, n: int) -> PopulationSummary:
        return validate_summary(
            PopulationSummary(
                self.mu_y, self.mu_x, self.sigma2_y, self.sigma2_x, self.rho,
                self.sigma2_u, self.sigma2_v, n,
            )
        )

    def to_dict(self) -> dict:
        return {
            "mu_y": self.mu_y,
            "mu_x": self.mu_x,
            "sigma2_y": self.sigma2_y,
            "sigma2_x": self.sigma2_x,
            "rho": self.rho,
            "sigma2_u": self.sigma2_u,
            "sigma2_v": self.sigma2_v,
            "n": self.n,
        }


@dataclass(frozen=True)
class MomentSet:
    """E(e0^2), E(e1^2), E(e0 e1) for e0 = (ybar - mu_y)/mu_y, e1 = (xbar - mu_x)/mu_x."""

    theta: float
    delta0: float
    delta1: float
    delta01: float
    c_y: float
    c_x: float


# Consumption expenditure (y) against income (x), ten households.
CONSUMPTION_INCOME = PopulationSummary(
    mu_y=127.0,
    mu_x=170.0,
    sigma2_y=1278.0,
    sigma2_x=3300.0,
    rho=0.964,
    sigma2_u=36.0,
    sigma2_v=36.0,
    n=10,
)


def _finite(name: str, value) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


def validate_summary(s: PopulationSummary) -> PopulationSummary:
    for name in ("mu_y", "mu_x", "sigma2_y", "sigma2_x", "rho", "sigma2_u", "sigma2_v"):
        _finite(name, getattr(s, name))
    if isinstance(s.n, bool) or not isinstance(s.n, Integral):
        raise DomainError(f"n: sample size must be an integer, got {s.n!r}")
    if s.n < 2:
        raise DomainError(f"n: sample size must be at least 2, got {s.n}")
    if not -1.0 <= s.rho <= 1.0:
        raise DomainError(f"rho: correlation out of range [-1, 1], got {s.rho}")
    if s.sigma2_y <= 0:
        raise DomainError(f"sigma2_y: study variance must be positive, got {s.sigma2_y}")
    if s.sigma2_x <= 0:
        raise DomainError(f"sigma2_x: auxiliary variance must be positive, got {s.sigma2_x}")
    if s.sigma2_u < 0:
        raise DomainError(f"sigma2_u: error variance must be nonnegative, got {s.sigma2_u}")
    if s.sigma2_v < 0:
        raise DomainError(f"sigma2_v: error variance must be nonnegative, got {s.sigma2_v}")
    if s.mu_y == 0:
        raise DomainError("mu_y: study mean must be nonzero")
    if s.mu_x == 0:
        raise DomainError("mu_x: auxiliary mean must be nonzero")
    return s


def derive_moments(s: PopulationSummary) -> MomentSet:
    validate_summary(s)
    theta, c_y, c_x = s.theta, s.c_y, s.c_x
    return MomentSet(
        theta=theta,
        delta0=theta * c_y**2 * s.inflation_y,
        delta1=theta * c_x**2 * s.inflation_x,
        delta01=theta * s.rho * c_x * c_y,
        c_y=c_y,
        c_x=c_x,
    )
