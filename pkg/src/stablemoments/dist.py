"""Density, distribution function and random variates of stable laws.

``X ~ S(alpha, beta, gamma, delta; 1)`` is written ``X = gamma (Z + delta*)``
with ``Z`` standard, so every evaluation reduces to the standardized argument
``z = x / gamma - delta*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gfun import g, g_tilde
from .params import as_param1, delta_star, theta0
from .quad import DEFAULT_CONFIG, QuadConfig

TAIL_SWITCH = 100.0
_CHUNK = 1_000_000


def standardize(x, p) -> float:
    p = as_param1(p)
    return x / p.gamma - delta_star(p)


def _tail_sf(z: float, alpha: float, beta: float) -> float:
    """``P(Z > z)`` for large positive z from the power series in ``z^-alpha``.

    Convergent for alpha < 1, asymptotic for alpha > 1; summed until the
    terms stop shrinking.  Not used at alpha == 1 with beta != 0.
    """
    t0 = theta0(alpha, beta)
    log_c = -math.log(math.cos(alpha * t0))
    log_z = math.log(z)
    total, prev = 0.0, math.inf
    for k in range(1, 200):
        log_mag = math.lgamma(alpha * k) - math.lgamma(k + 1.0) + k * (log_c - alpha * log_z)
        mag = math.exp(log_mag)
        if mag > prev:
            break
        total += (-1.0) ** (k + 1) * mag * math.sin(k * alpha * (math.pi / 2.0 + t0))
        if mag < 1e-17 * abs(total) or mag < 1e-300:
            break
        prev = mag
    return total / math.pi


def _use_tail(z: float, alpha: float, beta: float) -> bool:
    return abs(z) > TAIL_SWITCH and (alpha != 1.0 or beta == 0.0)


def _std_sf(z: float, alpha: float, beta: float, cfg) -> float:
    if _use_tail(z, alpha, beta):
        if z > 0:
            return _tail_sf(z, alpha, beta)
        return 1.0 - _tail_sf(-z, alpha, -beta)
    return 0.5 - g_tilde(0.0, z, alpha, beta, cfg) / math.pi


def _std_cdf(z: float, alpha: float, beta: float, cfg) -> float:
    if _use_tail(z, alpha, beta):
        if z > 0:
            return 1.0 - _tail_sf(z, alpha, beta)
        return _tail_sf(-z, alpha, -beta)
    return 0.5 + g_tilde(0.0, z, alpha, beta, cfg) / math.pi


def _clamp01(v: float, cfg: QuadConfig) -> float:
    slack = max(cfg.abs_tol, 10.0 * cfg.rel_tol * abs(v))
    if -slack <= v < 0.0:
        return 0.0
    if 1.0 < v <= 1.0 + slack:
        return 1.0
    return v


def _vectorize(fun, x):
    if np.ndim(x) == 0:
        return fun(float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([fun(float(v)) for v in arr.ravel()]).reshape(arr.shape)


def pdf(x, p, cfg: QuadConfig | None = None):
    """Density at ``x`` (scalar or array)."""
    p = as_param1(p)
    cfg = cfg or DEFAULT_CONFIG

    def one(v):
        z = standardize(v, p)
        return g(1.0, z, p.alpha, p.beta, cfg) / (math.pi * p.gamma)

    return _vectorize(one, x)


def cdf(x, p, cfg: QuadConfig | None = None):
    """Distribution function ``P(X <= x)`` (scalar or array)."""
    p = as_param1(p)
    cfg = cfg or DEFAULT_CONFIG

    def one(v):
        return _clamp01(_std_cdf(standardize(v, p), p.alpha, p.beta, cfg), cfg)

    return _vectorize(one, x)


def sf(x, p, cfg: QuadConfig | None = None):
    """Survival function ``P(X > x)``."""
    p = as_param1(p)
    cfg = cfg or DEFAULT_CONFIG

    def one(v):
        return _clamp01(_std_sf(standardize(v, p), p.alpha, p.beta, cfg), cfg)

    return _vectorize(one, x)


def prob_positive(p, cfg: QuadConfig | None = None) -> float:
    """``P(X > 0) = 1/2 - g~_0(-delta* | alpha, beta) / pi``."""
    p = as_param1(p)
    cfg = cfg or DEFAULT_CONFIG
    return _clamp01(_std_sf(-delta_star(p), p.alpha, p.beta, cfg), cfg)


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    seed: int
    n: int


def _uniform_exponential(seed: int, n: int):
    """Deviates for indices ``0..n-1``; chunk j always comes from key (seed, j)."""
    v = np.empty(n)
    w = np.empty(n)
    for j, start in enumerate(range(0, n, _CHUNK)):
        size = min(_CHUNK, n - start)
        rng = np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), j]))
        # one (uniform, uniform) row per index keeps every prefix identical
        u = rng.random((size, 2))
        v[start:start + size] = math.pi * (u[:, 0] - 0.5)
        w[start:start + size] = -np.log1p(-u[:, 1])
    return v, w


def standard_variates(alpha: float, beta: float, v, w):
    """Chambers-Mallows-Stuck transform of ``V ~ U(-pi/2, pi/2)``, ``W ~ Exp(1)``."""
    if alpha == 1.0:
        half = 0.5 * math.pi
        bv = half + beta * v
        return (bv * np.tan(v) - beta * np.log(half * w * np.cos(v) / bv)) / half
    b = theta0(alpha, beta)
    s = math.cos(alpha * b) ** (-1.0 / alpha)
    av = alpha * (v + b)
    return (s * np.sin(av) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha))


def sample(p, n: int, seed: int = 0) -> SampleBatch:
    """``n`` i.i.d. variates of the law, reproducible from ``seed``."""
    p = as_param1(p)
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    v, w = _uniform_exponential(int(seed), n)
    z = standard_variates(p.alpha, p.beta, v, w)
    return SampleBatch(p.gamma * (z + delta_star(p)), int(seed), n)
