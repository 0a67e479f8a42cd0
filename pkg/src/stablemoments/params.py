"""Stable-law parameter tuples, validation and the derived scalars.

Two parameterizations are supported.  ``StableParams1`` is the classical
one (characteristic exponent ``-gamma^alpha [|u|^alpha + i beta eta(u, alpha)]
+ i u delta``); ``StableParams0`` is the continuous scale-location family.
They share alpha, beta and gamma and differ only in the location.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

ALPHA_SNAP = 1e-8


class DomainError(ValueError):
    """An argument lies outside the region where a formula is defined."""


class ConvergenceError(ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


def snap_alpha(alpha: float) -> float:
    # tan(pi alpha / 2) blows up near 1; snap deterministically
    if abs(alpha - 1.0) < ALPHA_SNAP:
        return 1.0
    return float(alpha)


def check_alpha(alpha: float) -> float:
    if not (math.isfinite(alpha) and 0.0 < alpha < 2.0):
        raise DomainError(f"alpha={alpha!r} violates 0 < alpha < 2")
    return snap_alpha(alpha)


def check_beta(beta: float) -> float:
    if not (math.isfinite(beta) and -1.0 <= beta <= 1.0):
        raise DomainError(f"beta={beta!r} violates -1 <= beta <= 1")
    return float(beta)


def _check_gamma(gamma: float) -> float:
    if not (math.isfinite(gamma) and gamma > 0.0):
        raise DomainError(f"gamma={gamma!r} violates gamma > 0")
    return float(gamma)


def _check_location(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{name}={value!r} must be finite")
    return float(value)


@dataclass(frozen=True)
class StableParams1:
    alpha: float
    beta: float
    gamma: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        object.__setattr__(self, "beta", check_beta(self.beta))
        object.__setattr__(self, "gamma", _check_gamma(self.gamma))
        object.__setattr__(self, "delta", _check_location("delta", self.delta))

    def reflected(self) -> "StableParams1":
        """Parameters of ``-X``."""
        return StableParams1(self.alpha, -self.beta, self.gamma, -self.delta)

    def to_param0(self) -> "StableParams0":
        return StableParams0(self.alpha, self.beta, self.gamma,
                             self.delta + location_shift(self.alpha, self.beta, self.gamma))


@dataclass(frozen=True)
class StableParams0:
    alpha: float
    beta: float
    gamma: float = 1.0
    delta0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        object.__setattr__(self, "beta", check_beta(self.beta))
        object.__setattr__(self, "gamma", _check_gamma(self.gamma))
        object.__setattr__(self, "delta0", _check_location("delta0", self.delta0))

    def to_param1(self) -> StableParams1:
        return StableParams1(self.alpha, self.beta, self.gamma,
                             self.delta0 - location_shift(self.alpha, self.beta, self.gamma))


def location_shift(alpha: float, beta: float, gamma: float) -> float:
    """``delta0 - delta1`` for a law written in both parameterizations."""
    alpha = snap_alpha(alpha)
    if alpha == 1.0:
        return 2.0 / math.pi * beta * gamma * math.log(gamma)
    return beta * gamma * math.tan(math.pi * alpha / 2.0)


def convert(p):
    """Convert between the 0- and 1-parameterizations (either direction)."""
    if isinstance(p, StableParams0):
        return p.to_param1()
    if isinstance(p, StableParams1):
        return p.to_param0()
    raise TypeError(f"expected StableParams0 or StableParams1, got {type(p).__name__}")


def eta(u, alpha: float):
    """The skewness term of the characteristic exponent.

    ``-sign(u) tan(pi alpha/2) |u|^alpha`` for alpha != 1 and
    ``(2/pi) u log|u|`` for alpha == 1 (0 at u == 0).
    """
    alpha = check_alpha(alpha)
    if alpha == 1.0:
        if u == 0:
            return 0.0
        return 2.0 / math.pi * u * math.log(abs(u))
    return -math.copysign(1.0, u) * math.tan(math.pi * alpha / 2.0) * abs(u) ** alpha


def zeta(alpha: float, beta: float) -> float:
    """``-beta tan(pi alpha / 2)``; NaN at alpha == 1 where it is undefined."""
    alpha = snap_alpha(alpha)
    if alpha == 1.0:
        return math.nan
    if beta == 0.0:
        return 0.0
    return -beta * math.tan(math.pi * alpha / 2.0)


def theta0(alpha: float, beta: float) -> float:
    """Zolotarev's angle ``arctan(beta tan(pi alpha/2)) / alpha``.

    At alpha == 1 the alpha -> 1- limit is used: 0 for beta == 0, otherwise
    ``sign(beta) pi / 2``.
    """
    alpha = snap_alpha(alpha)
    if alpha == 1.0:
        return 0.0 if beta == 0.0 else math.copysign(math.pi / 2.0, beta)
    return math.atan(beta * math.tan(math.pi * alpha / 2.0)) / alpha


def delta_star(p: StableParams1) -> float:
    """Location of the law of ``X / gamma`` (unit scale, 1-parameterization)."""
    if p.alpha == 1.0:
        return p.delta / p.gamma + 2.0 / math.pi * p.beta * math.log(p.gamma)
    return p.delta / p.gamma


@dataclass(frozen=True)
class DerivedQuantities:
    delta_star: float
    zeta: float
    theta0: float

    @property
    def zeta_defined(self) -> bool:
        return not math.isnan(self.zeta)


def derived(p: StableParams1) -> DerivedQuantities:
    return DerivedQuantities(delta_star(p), zeta(p.alpha, p.beta), theta0(p.alpha, p.beta))


def as_param1(p) -> StableParams1:
    if isinstance(p, StableParams0):
        return p.to_param1()
    if isinstance(p, StableParams1):
        return p
    raise TypeError(f"expected stable parameters, got {type(p).__name__}")
