"""Truncated, absolute and signed fractional moments of stable laws.

``m^p(alpha, beta, gamma, delta) = E X_+^p`` is computed from ``g_{-p}`` and
``g~_{-p}`` evaluated at ``-delta*`` and scaled by ``gamma^p``.  Every other
moment here is a combination of ``m^p`` for ``X`` and ``-X``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dist import prob_positive
from .gfun import g, g_tilde
from .params import DomainError, StableParams1, as_param1, delta_star, theta0
from .quad import DEFAULT_CONFIG, QuadConfig

POLE_MARGIN = 1e-6
P_ONE_SNAP = 1e-12
KINDS = ("plus", "minus", "abs", "signed")


@dataclass(frozen=True)
class MomentQuery:
    p: float
    kind: str = "plus"
    a: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.p) and math.isfinite(self.a)):
            raise DomainError("p and a must be finite")


@dataclass(frozen=True)
class MomentResult:
    value: float
    experimental: bool = False


def _check_order(p: float, alpha: float, lower: float = 0.0):
    if not p >= lower:
        raise DomainError(f"p={p!r} below the supported range (p >= {lower})")
    if alpha <= 1.0 and abs(p - 1.0) < P_ONE_SNAP:
        raise DomainError("the p = 1 branch needs 1 < alpha")
    if p >= alpha - POLE_MARGIN:
        raise DomainError(
            f"p={p!r} too close to or beyond alpha={alpha!r}; need p < alpha - {POLE_MARGIN}")


def _no_positive_mass(alpha, beta, ds):
    # alpha < 1, beta = -1 puts the whole law on (-inf, delta*]
    return alpha < 1.0 and beta == -1.0 and ds <= 0.0


def _standard_plus(p: float, alpha: float, beta: float, ds: float, cfg) -> float:
    """``E Y_+^p`` for ``Y ~ S(alpha, beta, 1, ds; 1)`` and ``0 < p < alpha``."""
    x = -ds
    if abs(p - 1.0) < P_ONE_SNAP:
        return 0.5 * ds + (math.gamma(1.0 - 1.0 / alpha) - g(-1.0, x, alpha, beta, cfg)) / math.pi
    s, c = math.sin(0.5 * math.pi * p), math.cos(0.5 * math.pi * p)
    head = math.gamma(p + 1.0) / math.pi
    even = s * (math.gamma(1.0 - p / alpha) / p - g(-p, x, alpha, beta, cfg))
    if p < 1.0:
        odd = -c * g_tilde(-p, x, alpha, beta, cfg)
    else:
        odd = c * (ds / alpha * math.gamma((1.0 - p) / alpha) - g_tilde(-p, x, alpha, beta, cfg))
    return head * (even + odd)


def truncated_moment_plus(params, q, cfg: QuadConfig | None = None) -> float:
    """``E X_+^p``.  ``q`` is a MomentQuery or the bare exponent.

    Negative exponents go through :func:`conjectured_negative_moment`.
    """
    params = as_param1(params)
    cfg = cfg or DEFAULT_CONFIG
    p = q.p if isinstance(q, MomentQuery) else float(q)
    if p < 0.0:
        return conjectured_negative_moment(params, p, "plus", cfg).value
    _check_order(p, params.alpha)
    if p == 0.0:
        return prob_positive(params, cfg)
    ds = delta_star(params)
    if _no_positive_mass(params.alpha, params.beta, ds):
        return 0.0
    return params.gamma ** p * _standard_plus(p, params.alpha, params.beta, ds, cfg)


def truncated_moment_minus(params, q, cfg: QuadConfig | None = None) -> float:
    """``E X_-^p = E (-X)_+^p``."""
    return truncated_moment_plus(as_param1(params).reflected(), q, cfg)


def shifted_positive_mean(params, a: float, cfg: QuadConfig | None = None) -> float:
    """``E (X - a)_+`` for alpha > 1."""
    params = as_param1(params)
    if params.alpha <= 1.0:
        raise DomainError("E(X - a)_+ needs alpha > 1")
    gm = params.gamma
    # X - a ~ S(alpha, beta, gamma, delta - a; 1); g_{-1} is taken at -(delta - a)/gamma
    x = (a - params.delta) / gm
    return (0.5 * (params.delta - a)
            + gm / math.pi * (math.gamma(1.0 - 1.0 / params.alpha)
                              - g(-1.0, x, params.alpha, params.beta, cfg)))


def shifted_positive_mean_printed(params, a: float, cfg: QuadConfig | None = None) -> float:
    """The closed form with ``g_{-1}`` taken at ``(delta - a)/gamma``; verification only."""
    params = as_param1(params)
    if params.alpha <= 1.0:
        raise DomainError("E(X - a)_+ needs alpha > 1")
    x = (params.delta - a) / params.gamma
    return (0.5 * (params.delta - a)
            + params.gamma / math.pi * (math.gamma(1.0 - 1.0 / params.alpha)
                                        - g(-1.0, x, params.alpha, params.beta, cfg)))


def _both_sides(params, p_exp, cfg):
    params = as_param1(params)
    if not -1.0 < p_exp < params.alpha:
        raise DomainError(f"p={p_exp!r} outside (-1, alpha)")
    if p_exp < 0.0:
        plus = conjectured_negative_moment(params, p_exp, "plus", cfg).value
        minus = conjectured_negative_moment(params, p_exp, "minus", cfg).value
        return plus, minus, True
    return (truncated_moment_plus(params, p_exp, cfg),
            truncated_moment_minus(params, p_exp, cfg), False)


def abs_moment(params, p_exp: float, cfg: QuadConfig | None = None) -> float:
    """``E|X|^p = E X_+^p + E X_-^p``."""
    plus, minus, _ = _both_sides(params, p_exp, cfg or DEFAULT_CONFIG)
    return plus + minus


def signed_moment(params, p_exp: float, cfg: QuadConfig | None = None) -> float:
    """``E X^<p> = E X_+^p - E X_-^p`` with ``a^<p> = |a|^p sign(a)``."""
    plus, minus, _ = _both_sides(params, p_exp, cfg or DEFAULT_CONFIG)
    return plus - minus


def _printed_factor(p_exp, alpha, cfg, params):
    params = as_param1(params)
    if not -1.0 < p_exp < alpha - POLE_MARGIN or p_exp == 0.0:
        raise DomainError(f"p={p_exp!r} outside (-1, 0) U (0, alpha)")
    return params, params.gamma ** p_exp * 2.0 * math.gamma(p_exp + 1.0) / math.pi


def abs_moment_printed(params, p_exp: float, cfg: QuadConfig | None = None) -> float:
    """The single-formula ``E|X|^p`` exactly as displayed, including its ``delta*`` factor.

    Kept for cross-checks; disagrees with :func:`abs_moment` unless ``delta* = 1``.
    """
    params = as_param1(params)
    params, k = _printed_factor(p_exp, params.alpha, cfg, params)
    ds = delta_star(params)
    lead = ds * math.gamma(1.0 - p_exp / params.alpha) / p_exp if p_exp > 0 else 0.0
    gv = g(-p_exp, -ds, params.alpha, params.beta, cfg)
    return k * math.sin(0.5 * math.pi * p_exp) * (lead - gv)


def abs_moment_combined_closed(params, p_exp: float, cfg: QuadConfig | None = None) -> float:
    """The same display with the ``delta*`` factor dropped, as the combination implies."""
    params = as_param1(params)
    params, k = _printed_factor(p_exp, params.alpha, cfg, params)
    ds = delta_star(params)
    lead = math.gamma(1.0 - p_exp / params.alpha) / p_exp if p_exp > 0 else 0.0
    gv = g(-p_exp, -ds, params.alpha, params.beta, cfg)
    return k * math.sin(0.5 * math.pi * p_exp) * (lead - gv)


def signed_moment_printed(params, p_exp: float, cfg: QuadConfig | None = None) -> float:
    """The single-formula ``E X^<p>`` as displayed; verification only."""
    params = as_param1(params)
    params, k = _printed_factor(p_exp, params.alpha, cfg, params)
    ds = delta_star(params)
    lead = ds * math.gamma((1.0 - p_exp) / params.alpha) / params.alpha if p_exp > 1 else 0.0
    gv = g_tilde(-p_exp, -ds, params.alpha, params.beta, cfg)
    return k * math.cos(0.5 * math.pi * p_exp) * (lead - gv)


def is_strictly_stable(params) -> bool:
    params = as_param1(params)
    if params.alpha == 1.0:
        return params.beta == 0.0 and params.delta == 0.0
    return params.delta == 0.0


def strictly_stable_moment(params, p_exp: float, side: str = "plus") -> float:
    """Closed-form ``E X_+^p`` (or ``E X_-^p``) for a strictly stable law.

    Uses ``Gamma(1-p) sin(p pi) = pi / Gamma(p)``, which is finite and smooth
    through p = 1.
    """
    params = as_param1(params)
    if not is_strictly_stable(params):
        raise DomainError("law is not strictly stable (need delta = 0, and beta = 0 when alpha = 1)")
    if side not in ("plus", "minus"):
        raise DomainError(f"side must be 'plus' or 'minus', got {side!r}")
    alpha = params.alpha
    if not 0.0 < p_exp < alpha:
        raise DomainError(f"p={p_exp!r} outside (0, alpha)")
    t0 = theta0(alpha, params.beta)
    if side == "minus":
        t0 = -t0
    scale = params.gamma ** p_exp * math.cos(alpha * t0) ** (-p_exp / alpha)
    return (scale * math.gamma(1.0 - p_exp / alpha) * math.gamma(p_exp)
            * math.sin(p_exp * (0.5 * math.pi + t0)) / math.pi)


def conjectured_negative_moment(params, p_exp: float, side: str = "plus",
                                cfg: QuadConfig | None = None) -> MomentResult:
    """Conjectured ``E X_+^p`` for ``-1 < p < 0``; always flagged experimental."""
    params = as_param1(params)
    cfg = cfg or DEFAULT_CONFIG
    if not -1.0 < p_exp < 0.0:
        raise DomainError(f"conjecture covers -1 < p < 0, got p={p_exp!r}")
    if side == "minus":
        params = params.reflected()
    elif side != "plus":
        raise DomainError(f"side must be 'plus' or 'minus', got {side!r}")
    ds = delta_star(params)
    a, b = params.alpha, params.beta
    if _no_positive_mass(a, b, ds):
        return MomentResult(0.0, True)
    s, c = math.sin(0.5 * math.pi * p_exp), math.cos(0.5 * math.pi * p_exp)
    val = (math.gamma(p_exp + 1.0) / math.pi
           * (-s * g(-p_exp, -ds, a, b, cfg) - c * g_tilde(-p_exp, -ds, a, b, cfg)))
    return MomentResult(params.gamma ** p_exp * val, True)


def moment(params, q: MomentQuery, cfg: QuadConfig | None = None) -> MomentResult:
    """Dispatch on ``q.kind``; ``q.a`` shifts the variable to ``X - a``."""
    params = as_param1(params)
    cfg = cfg or DEFAULT_CONFIG
    if q.a != 0.0:
        params = StableParams1(params.alpha, params.beta, params.gamma, params.delta - q.a)
    experimental = q.p < 0.0
    if q.kind == "plus":
        return MomentResult(truncated_moment_plus(params, q.p, cfg), experimental)
    if q.kind == "minus":
        return MomentResult(truncated_moment_minus(params, q.p, cfg), experimental)
    if q.kind == "abs":
        return MomentResult(abs_moment(params, q.p, cfg), experimental)
    if q.kind == "signed" and q.p == 1.0 and params.alpha <= 1.0:
        raise DomainError("signed moment with p = 1 needs alpha > 1")
    return MomentResult(signed_moment(params, q.p, cfg), experimental)
