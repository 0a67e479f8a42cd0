"""The cosine and sine transforms ``g_d`` and ``g~_d`` of a stable law.

For ``d > 0``::

    g_d(x)  = int_0^inf cos(x r + beta eta(r)) r^(d-1) exp(-r^alpha) dr
    g~_d(x) = int_0^inf sin(x r + beta eta(r)) r^(d-1) exp(-r^alpha) dr

and for smaller ``d`` the integrands have ``1`` (or ``x r``) subtracted so the
integral still converges at the origin.

All branches are computed as the real or imaginary part of one complex
integral ``J = int (e^{i phi} - T(i phi)) r^(d-1) e^(-r^alpha) dr`` where
``phi`` is the phase continued analytically and ``T`` is a Taylor polynomial
of ``exp`` (``0``, ``1`` or ``1 + z``).  The path of integration is rotated to
a ray ``r = rho e^{i theta}`` on which the integrand oscillates less and
decays faster.  The angle is picked among a few admissible candidates by a
cheap cost model; any admissible angle gives the same value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma

from .params import ConvergenceError, DomainError, check_alpha, check_beta, theta0
from .quad import DEFAULT_CONFIG, QuadConfig, QuadResult, integrate_damped_oscillatory

TWO_OVER_PI = 2.0 / math.pi
EULER_GAMMA = 0.5772156649015329

_N_GRID = 64
_N_CAND = 9
_SHRINK = 0.85
_SMALL_Z = 0.5
# 1/(k+2)! for the remainder exp(z) - 1 - z = z^2 sum_k z^k/(k+2)!
_REM2 = np.array([1.0 / math.factorial(k + 2) for k in range(17)])


def _cexpm1(z):
    u, v = z.real, z.imag
    s = np.sin(0.5 * v)
    return np.expm1(u) * np.cos(v) - 2.0 * s * s + 1j * np.exp(u) * np.sin(v)


def _exp_rem2(z):
    acc = np.zeros_like(z) + _REM2[-1]
    for c in _REM2[-2::-1]:
        acc = acc * z + c
    return acc * z * z


def _order(which: str, d: float, alpha: float) -> int:
    """How many Taylor terms of exp are subtracted (0, 1 or 2)."""
    m1 = min(1.0, alpha)
    if which == "g":
        if d > 0:
            return 0
        if d <= -2.0 * m1:
            raise DomainError(f"g_d needs d > -2 min(1, alpha) = {-2.0 * m1!r}, got d={d!r}")
        return 1 if d > -m1 else 2
    if which == "g_tilde":
        if d > 0:
            return 0
        if d > -m1:
            return 1
        if alpha > 1.0 and d > -alpha:
            return 2
        raise DomainError(
            f"g~_d needs d > -min(1, alpha), or -alpha < d <= -1 when alpha > 1; got d={d!r}")
    raise DomainError(f"unknown function selector {which!r}")


def _phase_order(x, alpha, beta):
    # power of r in the leading term of the phase near 0
    orders = []
    if x != 0.0:
        orders.append(1.0)
    if beta != 0.0:
        orders.append(1.0 if alpha == 1.0 else alpha)
    return min(orders) if orders else math.inf


def _exponent(rho, theta, x, alpha, beta):
    """Return ``(i phi, r^alpha)`` at ``r = rho e^{i theta}``."""
    r = rho * np.exp(1j * theta)
    if alpha == 1.0:
        ra = r
        phi = x * r
        if beta != 0.0:
            phi = phi + beta * TWO_OVER_PI * r * (np.log(rho) + 1j * theta)
    else:
        ra = rho ** alpha * np.exp(1j * alpha * theta)
        phi = x * r
        if beta != 0.0:
            phi = phi - beta * math.tan(math.pi * alpha / 2.0) * ra
    return 1j * phi, ra


@dataclass(frozen=True)
class _Ray:
    theta: float
    rate: float
    cutoff: float
    freq: float
    cost: float


def _damped_subtraction(d, alpha, m):
    # the subtracted Taylor terms can carry their own damping exp(-lambda r^alpha)
    # when the compensating integrals converge, i.e. for d > -alpha
    return m > 0 and d > -alpha


def _rates(theta, alpha, beta, m, damped):
    """Decay rates of |main term| and |subtracted term| on the ray."""
    theta = np.asarray(theta, dtype=float)
    if alpha == 1.0:
        main = np.cos(theta)
        sub = main
    else:
        t0 = theta0(alpha, beta)
        main = np.cos(alpha * (theta + t0)) / math.cos(alpha * t0)
        sub = np.cos(alpha * theta)
    if not m or damped:
        sub = np.full_like(theta, np.inf)
    return main, sub


def _candidates(x, alpha, beta, m):
    half = math.pi / 2.0
    if alpha == 1.0:
        lo, hi = -half, half
        # rays against the sign of beta only pass the arc check when |x| is large
        if x == 0.0 and beta > 0:
            lo = 0.0
        elif x == 0.0 and beta < 0:
            hi = 0.0
        special = []
    else:
        t0 = theta0(alpha, beta)
        lo, hi = -half / alpha - t0, half / alpha - t0
        if m:
            lo, hi = max(lo, -half / alpha), min(hi, half / alpha)
        lo, hi = max(lo, -half), min(hi, half)
        special = [-t0]
    if x > 0:
        lo = max(lo, 0.0)
    elif x < 0:
        hi = min(hi, 0.0)
    cands = {0.0}
    if hi > lo:
        cands.update(np.linspace(_SHRINK * lo, _SHRINK * hi, _N_CAND).tolist())
        # -theta0 kills the oscillation of the main term when x = 0
        cands.update(t for t in special if lo <= t <= hi and t != 0.0)
    return np.array(sorted(cands))


def _phase_slope(rho, theta, x, alpha, beta, sub_oscillates):
    """|d/drho| of the phases of the main and subtracted terms."""
    c, s = np.cos(theta), np.sin(theta)
    if alpha == 1.0:
        main = x * c - s
        if beta != 0.0:
            main = main + beta * TWO_OVER_PI * (c * (np.log(rho) + 1.0) - theta * s)
        sub = s
    else:
        t0 = theta0(alpha, beta)
        k = alpha * rho ** (alpha - 1.0)
        main = x * c - k * np.sin(alpha * (theta + t0)) / math.cos(alpha * t0)
        sub = k * np.sin(alpha * theta)
    out = np.abs(main)
    if sub_oscillates:
        out = np.maximum(out, np.abs(sub))
    return out


def _plan_rays(x, alpha, beta, d, m, cfg, max_rays=3):
    """Yield the ``max_rays`` cheapest admissible rays, cheapest first."""
    damped = _damped_subtraction(d, alpha, m)
    thetas = _candidates(x, alpha, beta, m)
    a_main, a_sub = _rates(thetas, alpha, beta, m, damped)
    rate = np.minimum(a_main, a_sub)
    keep = rate > 1e-3
    thetas, rate = thetas[keep], rate[keep]
    log_eps = math.log(cfg.tail_epsilon)

    # envelope cutoff r^(d-1) e^(-a r^alpha) ~ eps, two fixed-point steps
    big = (-log_eps / rate) ** (1.0 / alpha)
    for _ in range(2):
        big = ((-log_eps + max(d - 1.0, 0.0) * np.log(np.maximum(big, 1.0))) / rate) ** (1.0 / alpha)
    big = np.maximum(big, 1.0)
    s = np.arange(1, _N_GRID + 1) / _N_GRID
    rho = big[:, None] * s[None, :]
    th = thetas[:, None]

    iphi, ra = _exponent(rho, th, x, alpha, beta)
    logmag = np.real(iphi - ra)
    dph = np.abs(np.diff(np.imag(iphi - ra), axis=1))
    if m and damped:
        logmag = np.maximum(logmag, -rate[:, None] * rho ** alpha)
    elif m:
        logmag = np.maximum(logmag, -np.real(ra))
        dph = np.maximum(dph, np.abs(np.diff(np.imag(ra), axis=1)))
    logmag = logmag + (d - 1.0) * np.log(rho)
    far = rho >= 0.5
    ref = np.max(np.where(far, logmag, -np.inf), axis=1)
    alive = logmag > (ref + log_eps)[:, None]
    # first grid point past the last live one
    last = _N_GRID - 1 - np.argmax(alive[:, ::-1], axis=1)
    idx = np.minimum(last + 1, _N_GRID - 1)
    cut = rho[np.arange(len(thetas)), idx]

    if alpha == 1.0 and beta != 0.0:
        # beyond the cutoff the ray integrand grows again when beta theta < 0;
        # such a ray is usable only if the closing arc back to the real axis is negligible
        for i in np.nonzero(beta * thetas < 0.0)[0]:
            arc = np.linspace(thetas[i], 0.0, 17)
            e, _ = _exponent(cut[i], arc, x, alpha, beta)
            arc_log = np.real(e - cut[i] * np.exp(1j * arc)) + (d - 1.0) * math.log(cut[i])
            if np.max(arc_log) > ref[i] + log_eps - 5.0:
                alive[i] = True
                cut[i] = math.inf
    drho = np.diff(rho, axis=1)
    seg = np.maximum(drho, dph / (2.0 * math.pi))
    seg = np.where(alive[:, 1:] | alive[:, :-1], seg, 0.0)
    cost = seg.sum(axis=1)

    order = sorted((i for i in range(len(thetas)) if math.isfinite(cut[i])),
                   key=lambda i: (cost[i], abs(thetas[i])))
    # lazily: the caller usually stops after the first ray
    for i in order[:max_rays]:
        live = rho[i] <= cut[i]
        slope = _phase_slope(rho[i][live & (rho[i] >= 1.0)], thetas[i], x, alpha, beta,
                             m and not damped)
        freq = float(slope.max()) if slope.size else 0.0
        yield _Ray(float(thetas[i]), float(rate[i]), float(cut[i]), freq, float(cost[i]))


def _reg_power_integral(s, lam, alpha):
    """``int_0^inf r^(s-1) (exp(-r^alpha) - exp(-lam r^alpha)) dr`` for s > -alpha."""
    log_lam = complex(np.log(complex(lam)))
    if s == 0.0:
        return log_lam / alpha
    z = np.array(-(s / alpha) * log_lam)
    return -complex(_cexpm1(z)) * math.gamma(s / alpha) / alpha


def _integrate_ray(ray, which, d, x, alpha, beta, m, nu, cfg):
    rot = np.exp(1j * ray.theta * d)
    take = np.real if which == "g" else np.imag
    rate = ray.rate
    damped = _damped_subtraction(d, alpha, m)
    # subtracted terms carry exp(-lam r^alpha); on the ray lam r^alpha = rate rho^alpha
    lam = rate * np.exp(-1j * alpha * ray.theta) if damped else 1.0

    def w(rho):
        rho = np.asarray(rho, dtype=float)
        iphi, ra = _exponent(rho, ray.theta, x, alpha, beta)
        env = rate * rho ** alpha
        with np.errstate(over="ignore", invalid="ignore"):
            if m == 0:
                k = np.exp(iphi - ra + env)
            else:
                sub = -lam * ra
                q = ra + sub
                taylor = 1.0 if m == 1 else 1.0 + iphi
                es = np.exp(sub + env)
                k = np.exp(iphi - ra + env) - taylor * es
                # cancellation-free form where both exponents are small
                small = (np.abs(iphi) < _SMALL_Z) & (np.abs(q) < _SMALL_Z)
                if small.any():
                    zi, zq = iphi[small], q[small]
                    rem = _cexpm1(zi) if m == 1 else _exp_rem2(zi)
                    t = 1.0 if m == 1 else 1.0 + zi
                    k[small] = es[small] * (rem * np.exp(-zq) + t * _cexpm1(-zq))
        return take(rot * k)

    res = integrate_damped_oscillatory(w, ray.freq, alpha, d, cfg, rate=rate,
                                       small_r_exponent=nu, cutoff=ray.cutoff)
    comp = 0.0
    if damped:
        comp = _reg_power_integral(d, lam, alpha)
        if m == 2:
            comp += 1j * x * _reg_power_integral(d + 1.0, lam, alpha)
            comp -= 1j * beta * math.tan(math.pi * alpha / 2.0) * _reg_power_integral(d + alpha, lam, alpha)
        comp = float(take(comp))
    return QuadResult(res.value - comp, res.error_estimate, res.subdivisions_used, res.converged)


def gfun_result(which: str, d: float, x: float, alpha: float, beta: float,
                cfg: QuadConfig | None = None) -> QuadResult:
    """Value of ``g_d`` (``which="g"``) or ``g~_d`` (``which="g_tilde"``) with diagnostics.

    Never raises on non-convergence; inspect ``converged``.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha, beta = check_alpha(alpha), check_beta(beta)
    d, x = float(d), float(x)
    if not (math.isfinite(d) and math.isfinite(x)):
        raise DomainError("d and x must be finite")
    m = _order(which, d, alpha)

    correction = 0.0
    if which == "g_tilde" and m == 2:
        # Im(e^{i phi} - 1 - i phi) = sin(phi) - x r + beta tan(pi alpha/2) r^alpha
        correction = -beta * math.tan(math.pi * alpha / 2.0) * _gamma(1.0 + d / alpha) / alpha

    order = _phase_order(x, alpha, beta)
    if m and order == math.inf:
        # phase identically zero
        return QuadResult(correction, 0.0, 0, True)
    if m == 0:
        nu = d
    elif _damped_subtraction(d, alpha, m):
        nu = d + min(m * order, alpha)
    else:
        nu = d + m * order

    best = None
    for ray in _plan_rays(x, alpha, beta, d, m, cfg):
        res = _integrate_ray(ray, which, d, x, alpha, beta, m, nu, cfg)
        if best is None or res.error_estimate < best.error_estimate:
            best = res
        if res.converged:
            break
    return QuadResult(best.value + correction, best.error_estimate,
                      best.subdivisions_used, best.converged)


def _checked(res: QuadResult, what: str) -> float:
    if not res.converged:
        raise ConvergenceError(
            f"{what} did not converge (estimate {res.value!r}, error {res.error_estimate:.3g})", res)
    return res.value


def g(d: float, x: float, alpha: float, beta: float, cfg: QuadConfig | None = None) -> float:
    """``g_d(x | alpha, beta)``; raises ConvergenceError if the tolerance is missed."""
    return _checked(gfun_result("g", d, x, alpha, beta, cfg), f"g_{d}({x})")


def g_tilde(d: float, x: float, alpha: float, beta: float, cfg: QuadConfig | None = None) -> float:
    """``g~_d(x | alpha, beta)``; raises ConvergenceError if the tolerance is missed."""
    return _checked(gfun_result("g_tilde", d, x, alpha, beta, cfg), f"g~_{d}({x})")


@dataclass(frozen=True)
class GFunQuery:
    d: float
    x: float
    alpha: float
    beta: float
    cfg: QuadConfig = field(default=DEFAULT_CONFIG)

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        object.__setattr__(self, "beta", check_beta(self.beta))

    def g(self) -> float:
        return g(self.d, self.x, self.alpha, self.beta, self.cfg)

    def g_tilde(self) -> float:
        return g_tilde(self.d, self.x, self.alpha, self.beta, self.cfg)

    def evaluate(self, which: str) -> float:
        if which == "g":
            return self.g()
        if which == "g_tilde":
            return self.g_tilde()
        raise DomainError(f"unknown function selector {which!r}")


def closed_form_at_zero(d: float, alpha: float, beta: float, which: str = "g") -> float:
    """Exact ``g_d(0)`` or ``g~_d(0)`` for alpha != 1.

    Valid for d > -alpha, with d = 0 handled by its own limit.
    """
    alpha = check_alpha(alpha)
    beta = check_beta(beta)
    if alpha == 1.0:
        raise DomainError("closed forms at x = 0 need alpha != 1")
    if which not in ("g", "g_tilde"):
        raise DomainError(f"unknown function selector {which!r}")
    if not d > -alpha:
        raise DomainError(f"closed form needs d > -alpha = {-alpha!r}, got d={d!r}")
    t0 = theta0(alpha, beta)
    c = math.cos(alpha * t0)
    if d == 0.0:
        return math.log(c) / alpha if which == "g" else -t0
    scale = c ** (d / alpha) * math.gamma(1.0 + d / alpha) / d
    if which == "g_tilde":
        return -scale * math.sin(d * t0)
    if d > 0:
        return scale * math.cos(d * t0)
    return (c ** (d / alpha) * math.cos(d * t0) - 1.0) * math.gamma(1.0 + d / alpha) / d


def h_result(x: float, cfg: QuadConfig | None = None) -> QuadResult:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("x must be finite")

    def w(r):
        return np.cos(x * r) * np.log(r)

    return integrate_damped_oscillatory(w, abs(x), 1.0, 1.0, cfg, small_r_exponent=1.0)


def h(x: float, cfg: QuadConfig | None = None) -> float:
    """``int_0^inf cos(x r) log(r) e^(-r) dr``."""
    return _checked(h_result(x, cfg), f"h({x})")
