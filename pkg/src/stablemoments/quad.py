"""Quadrature for ``int_0^inf w(r) r^(d-1) exp(-rate r^alpha) dr``.

The range is split at ``min(1, R)`` where ``R`` is the envelope cutoff.
The head ``(0, 1]`` carries the algebraic singularity of ``r^(d-1)`` and
is handled by a tanh-sinh rule whose nodes cluster double-exponentially at
0; the remaining sliver ``(0, r_min)`` is added from the leading power law.
The tail ``[1, R]`` is covered by Gauss-Kronrod (7, 15) panels sized to
the oscillation period and refined by global adaptive bisection.  For
``alpha < 0.5`` the tail works in ``t = r^alpha`` so the envelope becomes
``exp(-rate t)``.

The weight ``r^(d-1) exp(-rate r^alpha)`` and the change-of-variable
Jacobians are combined in log space, so ``w`` only has to supply the
bounded factor.  ``w`` is called with a 1-d float array and must return
an array of the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .params import DomainError

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point layout: -x0..-x6, 0, x6..x0
_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])
_WK = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[9, 11, 13]] = _WG[2::-1]

_EPMACH = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny

# tanh-sinh settings for the head piece
_TS_BASE_INTERVALS = 32
_TS_MAX_LEVEL = 7
_TS_UPPER_S = 40.0
_RHO_FLOOR = 1e-140


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    tail_epsilon: float = 1e-16

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "tail_epsilon"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"QuadConfig.{name} must be positive, got {v!r}")
        if int(self.max_subdivisions) < 1:
            raise ValueError("QuadConfig.max_subdivisions must be >= 1")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions_used: int
    converged: bool


def choose_cutoff(alpha: float, d: float, tail_epsilon: float, rate: float = 1.0) -> float:
    """Smallest ``R`` past the envelope peak where ``r^max(d-1,0) exp(-rate r^alpha)``
    has fallen to ``tail_epsilon`` times its maximum."""
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha={alpha!r} violates 0 < alpha < 2")
    if rate <= 0.0:
        raise DomainError("envelope rate must be positive")
    drop = -math.log(tail_epsilon)
    k = max(d - 1.0, 0.0)
    if k == 0.0:
        return (drop / rate) ** (1.0 / alpha)
    peak = (k / (rate * alpha)) ** (1.0 / alpha)
    top = k * math.log(peak) - rate * peak ** alpha

    def excess(r):
        return (k * math.log(r) - rate * r ** alpha) - (top - drop)

    hi = 2.0 * peak + 1.0
    while excess(hi) > 0.0:
        hi *= 2.0
    return brentq(excess, peak, hi, xtol=1e-12, rtol=1e-14)


def _weighted(w, r, logw):
    vals = np.asarray(w(r), dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = vals * np.exp(np.minimum(logw, 700.0))
    return np.where(vals == 0.0, 0.0, out)


def _head_tanh_sinh(w, alpha, d, rate, split, nu, cfg):
    """Integral over (0, split] with nodes r = split / (1 + exp(-pi sinh t))."""
    log_split = math.log(split)
    tol = 1e-3 * cfg.abs_tol * min(cfg.rel_tol / 1e-8, 1.0)
    # keep both the weight r^(d-1) and the factor w ~ r^(nu-d) inside double range
    floor = max(_RHO_FLOOR, math.exp(-600.0 / max(1.0 - d, nu - d, 1.0)))
    r_min = max((tol * nu) ** (1.0 / nu) if nu < 50 else 0.0, floor * split)
    r_min = min(r_min, 1e-3 * split)
    s_lo = math.log(r_min / split)
    t_lo = math.asinh(s_lo / math.pi)
    t_hi = math.asinh(_TS_UPPER_S / math.pi)

    def evaluate(t):
        s = math.pi * np.sinh(t)
        log_sig = -np.log1p(np.exp(-s))
        log_csig = -np.log1p(np.exp(s))
        log_r = log_split + log_sig
        r = np.exp(log_r)
        logw = ((d - 1.0) * log_r - rate * r ** alpha + log_split
                + np.log(math.pi * np.cosh(t)) + log_sig + log_csig)
        return _weighted(w, r, logw), r

    n = _TS_BASE_INTERVALS
    h = (t_hi - t_lo) / n
    t = t_lo + h * np.arange(n + 1)
    f, r = evaluate(t)
    # sliver (0, r_min): leading power law C r^(nu-1)
    f_lo = float(_weighted(w, r[:1], np.array([(d - 1.0) * math.log(r[0]) - rate * r[0] ** alpha]))[0])
    sliver = f_lo * r[0] / nu
    # Euler-Maclaurin slope at t_lo, from F(t) ~ C pi cosh(t) exp(nu pi sinh t)
    slope_lo = f[0] * (nu * math.pi * math.cosh(t_lo) + math.tanh(t_lo))
    total = f.sum() - 0.5 * (f[0] + f[-1])
    estimates = [h * total + sliver + h * h / 12.0 * slope_lo]
    err = math.inf
    level = 0
    while level < _TS_MAX_LEVEL:
        level += 1
        h *= 0.5
        n *= 2
        t_new = t_lo + h * np.arange(1, n, 2)
        f_new, _ = evaluate(t_new)
        total += f_new.sum()
        estimates.append(h * total + sliver + h * h / 12.0 * slope_lo)
        d1 = abs(estimates[-1] - estimates[-2])
        if len(estimates) >= 3:
            d2 = abs(estimates[-1] - estimates[-3])
        else:
            d2 = 0.0
        if d1 == 0.0:
            err = 0.0
        elif d2 > 0.0 and d1 < 1.0 and d2 < 1.0 and d1 < d2:
            l1, l2 = math.log10(d1), math.log10(d2)
            err = min(d1, 10.0 ** (l1 * l1 / l2))
        else:
            err = d1
        err = max(err, 64 * _EPMACH * h * float(np.abs(f_new).sum() + abs(total)))
        if level >= 2 and err <= max(0.5 * cfg.abs_tol, 0.5 * cfg.rel_tol * abs(estimates[-1])):
            break
    return estimates[-1], err, level


def _gk_panels(f, a, b):
    """Vectorised G7/K15 over panels [a_i, b_i]; returns (values, errors)."""
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    fx = f(x.ravel()).reshape(x.shape)
    resk = fx @ _WK
    resg = fx @ _WG15
    resabs = np.abs(fx) @ _WK
    reskh = 0.5 * resk
    resasc = np.abs(fx - reskh[:, None]) @ _WK
    abserr = np.abs((resk - resg) * half)
    resasc = resasc * np.abs(half)
    resabs = resabs * np.abs(half)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * abserr / resasc) ** 1.5)
    abserr = np.where((resasc != 0.0) & (abserr != 0.0), scaled, abserr)
    floor = 50.0 * _EPMACH * resabs
    abserr = np.where(resabs > _UFLOW / (50.0 * _EPMACH), np.maximum(floor, abserr), abserr)
    return resk * half, abserr


def _tail_breaks(lo, hi, step_of, cap):
    edges = [lo]
    while edges[-1] < hi and len(edges) <= cap:
        edges.append(min(hi, edges[-1] + step_of(edges[-1])))
    if edges[-1] < hi:
        edges.extend(np.linspace(edges[-1], hi, 9)[1:])
    return np.asarray(edges)


def _tail_adaptive(f, edges, cfg, head_value):
    a, b = edges[:-1].copy(), edges[1:].copy()
    vals, errs = _gk_panels(f, a, b)
    used = len(a)
    while True:
        value = float(vals.sum())
        err = float(errs.sum())
        target = max(0.5 * cfg.abs_tol, 0.5 * cfg.rel_tol * abs(value + head_value))
        if err <= target:
            return value, err, used, True
        if used >= cfg.max_subdivisions:
            return value, err, used, False
        share = target / len(a)
        pick = errs > share
        if not pick.any():
            pick[np.argmax(errs)] = True
        room = cfg.max_subdivisions - used
        idx = np.flatnonzero(pick)
        if len(idx) > room:
            idx = idx[np.argsort(errs[idx])[::-1][:max(room, 1)]]
        mid = 0.5 * (a[idx] + b[idx])
        na = np.concatenate([a[idx], mid])
        nb = np.concatenate([mid, b[idx]])
        nv, ne = _gk_panels(f, na, nb)
        keep = np.ones(len(a), dtype=bool)
        keep[idx] = False
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        used += len(idx)


def integrate_damped_oscillatory(integrand, phase_frequency_hint: float, alpha: float, d: float,
                                 cfg: QuadConfig | None = None, *, rate: float = 1.0,
                                 small_r_exponent: float | None = None,
                                 cutoff: float | None = None) -> QuadResult:
    """Integrate ``integrand(r) * r^(d-1) * exp(-rate r^alpha)`` over ``(0, inf)``.

    ``phase_frequency_hint`` bounds the local angular frequency of the
    integrand on ``[1, R]`` and fixes the initial panel length.
    ``small_r_exponent`` is the power ``nu`` with ``integrand(r) r^(d-1) ~ r^(nu-1)``
    as ``r -> 0``; it defaults to ``d``.
    """
    cfg = cfg or DEFAULT_CONFIG
    nu = d if small_r_exponent is None else small_r_exponent
    if not nu > 0.0:
        raise DomainError(f"integrand is not integrable at 0 (small-r exponent {nu!r} <= 0)")
    big_r = choose_cutoff(alpha, d, cfg.tail_epsilon, rate) if cutoff is None else float(cutoff)
    split = min(1.0, big_r)

    head, head_err, levels = _head_tanh_sinh(integrand, alpha, d, rate, split, nu, cfg)

    tail, tail_err, panels, tail_ok = 0.0, 0.0, 0, True
    if big_r > split * (1.0 + 1e-12):
        freq = abs(phase_frequency_hint)
        if alpha < 0.5:
            inv = 1.0 / alpha

            def f(t):
                r = t ** inv
                logw = (d - 1.0) * np.log(r) - rate * t + math.log(inv) + (inv - 1.0) * np.log(t)
                return _weighted(integrand, r, logw)

            def step(t):
                span = inv * t ** (inv - 1.0)
                return min(1.0, 2.0 * math.pi / (freq * span)) if freq > 0 else 1.0

            edges = _tail_breaks(split ** alpha, big_r ** alpha, step, cfg.max_subdivisions // 2)
        else:
            def f(r):
                logw = (d - 1.0) * np.log(r) - rate * r ** alpha
                return _weighted(integrand, r, logw)

            length = min(1.0, 2.0 * math.pi / freq) if freq > 0 else 1.0
            n = int(math.ceil((big_r - split) / length))
            n = max(1, min(n, max(1, cfg.max_subdivisions // 2)))
            edges = np.linspace(split, big_r, n + 1)
        tail, tail_err, panels, tail_ok = _tail_adaptive(f, edges, cfg, head)

    value = head + tail
    err = head_err + tail_err
    converged = tail_ok and err <= cfg.target(value)
    return QuadResult(float(value), float(err), int(levels + panels), bool(converged))
