"""Brute-force evaluators used to check the analytic paths.

Nothing here calls :mod:`stablemoments.gfun`.  The density comes from
Zolotarev's single-integral representation, the characteristic-function
integrals are summed with :func:`scipy.integrate.quad`, and the Monte Carlo
estimates use the Chambers-Mallows-Stuck sampler.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
import math
import warnings
from contextlib import contextmanager
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, optimize, special

from .dist import sample, standard_variates
from .moments import MomentQuery, moment
from .params import DomainError, StableParams1, as_param1, delta_star, theta0

HALF_PI = 0.5 * math.pi
TAIL_START = 50.0
NEAR_ZERO = 0.05
ALPHA1_SWITCH = 1000.0
BLOCKS = 32
ORACLE_KINDS = ("density_quad", "cf_integral", "monte_carlo")

_QUAD = dict(epsabs=0.0, epsrel=1e-11, limit=400)



@contextmanager
def _quiet():
    # quad's warnings are advisory here; accuracy is checked against other paths
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        yield


# ---------------------------------------------------------------- density

def _zolotarev_alpha1(z: float, beta: float) -> float:
    if beta < 0.0:
        return _zolotarev_alpha1(-z, -beta)
    scale = math.pi * z / (2.0 * beta)

    def log_v(t):
        bt = HALF_PI + beta * t
        return math.log(bt / (HALF_PI * math.cos(t))) + bt * math.tan(t) / beta

    def u(t):  # log of h V with h = exp(-pi z / (2 beta))
        return log_v(t) - scale

    def f(t):
        e = u(t)
        return math.exp(e - math.exp(e)) if e < 700.0 else 0.0

    return _peak_split(f, u, -HALF_PI, HALF_PI) / (2.0 * beta)


def _peak_split(f, u, lo, hi):
    """Integrate ``exp(u - e^u)`` with breaks where u crosses a few levels.

    ``u`` is monotone in the angle, so the peak (u = 0) and its shoulders are
    located by bracketing; without the breaks the peak can be arbitrarily
    narrow and sit next to an endpoint.
    """
    eps = 1e-12 * (hi - lo)
    a, b = lo + eps, hi - eps
    ua, ub = u(a), u(b)
    pts = []
    for level in (-40.0, -12.0, -4.0, -1.0, 0.0, 1.0, 2.5):
        if (ua < level) != (ub < level):
            pts.append(optimize.brentq(lambda t: u(t) - level, a, b, xtol=1e-15, rtol=1e-15))
    edges = [lo, *sorted(pts), hi]
    with _quiet():
        return sum(integrate.quad(f, s, t, **_QUAD)[0] for s, t in zip(edges[:-1], edges[1:]) if t > s)


def zolotarev_pdf(z: float, alpha: float, beta: float) -> float:
    """Standard density ``f(z | alpha, beta)`` in the 1-parameterization."""
    if alpha == 1.0:
        if beta == 0.0:
            return 1.0 / (math.pi * (1.0 + z * z))
        return _zolotarev_alpha1(z, beta)
    if z < 0.0:
        return zolotarev_pdf(-z, alpha, -beta)
    t0 = theta0(alpha, beta)
    cos_at0 = math.cos(alpha * t0)
    if z < 1e-10:
        return math.gamma(1.0 + 1.0 / alpha) * math.cos(t0) * cos_at0 ** (1.0 / alpha) / math.pi
    if t0 <= -HALF_PI + 1e-15:
        return 0.0  # alpha < 1, beta = -1: no mass on the positive axis
    k = alpha / (alpha - 1.0)
    log_x = k * math.log(z)
    base = math.log(cos_at0) / (alpha - 1.0)

    def u(t):
        ct = math.cos(t)
        return (log_x + base + k * (math.log(ct) - math.log(math.sin(alpha * (t0 + t))))
                + math.log(math.cos(alpha * t0 + (alpha - 1.0) * t)) - math.log(ct))

    def f(t):
        try:
            e = u(t)
        except ValueError:
            return 0.0
        return math.exp(e - math.exp(e)) if e < 700.0 else 0.0

    total = _peak_split(f, u, -t0, HALF_PI)
    return alpha * total / (math.pi * abs(alpha - 1.0) * z)


def oracle_pdf(x: float, params) -> float:
    params = as_param1(params)
    z = x / params.gamma - delta_star(params)
    with _quiet():
        return zolotarev_pdf(z, params.alpha, params.beta) / params.gamma


def _tail_coefficients(alpha, beta, kmax=60):
    t0 = theta0(alpha, beta)
    log_c = -math.log(math.cos(alpha * t0))
    for k in range(1, kmax):
        mag = math.exp(math.lgamma(alpha * k + 1.0) - math.lgamma(k + 1.0) + k * log_c)
        sn = math.sin(k * alpha * (HALF_PI + t0))
        if abs(sn) < 1e-12:
            continue  # exact zeros, e.g. every even k for Cauchy
        yield k, (-1.0) ** (k + 1) * mag * sn / math.pi


def _series_tail(p, shift, big_t, alpha, beta):
    """``int_T^inf (z + shift)^p f(z) dz`` from the power series of the upper tail."""
    total, prev = 0.0, math.inf
    for k, coef in _tail_coefficients(alpha, beta):
        s = alpha * k
        term = (coef * big_t ** (p - s) / (s - p)
                * special.hyp2f1(-p, s - p, s - p + 1.0, -shift / big_t))
        if abs(term) > prev and k > 2:
            break
        total += term
        prev = abs(term)
        if prev < 1e-17 * max(abs(total), 1e-300):
            break
    return total


def _alpha1_tail_pdf(z, beta):
    """Two terms of the large-z expansion of the alpha = 1 density.

    Expanding ``exp(-u (1 + i k ln u))`` in powers of u and integrating
    against ``exp(-i u z)`` term by term gives Mellin transforms
    ``Gamma(s) (i z)^-s`` and their s-derivatives.
    """
    k = 2.0 * beta / math.pi
    log_iz = complex(math.log(z), HALF_PI)

    def mellin(s, m):
        base = math.gamma(s) * cmath.exp(-s * log_iz)
        d = special.digamma(s) - log_iz
        if m == 0:
            return base
        if m == 1:
            return base * d
        return base * (d * d + special.polygamma(1, s))

    first = -(mellin(2, 0) + 1j * k * mellin(2, 1))
    second = 0.5 * (mellin(3, 0) + 2j * k * mellin(3, 1) - k * k * mellin(3, 2))
    return (first + second).real / math.pi


def _upper_tail(p, alpha, beta, ds, big_t):
    """``int_T^inf (z + ds)^p f(z) dz`` for ``T >= |ds| + 50``."""
    if alpha != 1.0 or beta == 0.0:
        return _series_tail(p, ds, big_t, alpha, beta)
    total = 0.0
    edges = np.geomspace(big_t, ALPHA1_SWITCH, 7)
    for s, t in zip(edges[:-1], edges[1:]):
        total += integrate.quad(lambda z: (z + ds) ** p * zolotarev_pdf(z, alpha, beta),
                                s, t, **_QUAD)[0]
    if beta > -1.0:
        total += integrate.quad(lambda z: (z + ds) ** p * _alpha1_tail_pdf(z, beta),
                                ALPHA1_SWITCH, math.inf, **_QUAD)[0]
    return total


def _near_origin(p, alpha, beta, ds, width):
    """``int (z + ds)^p f(z) dz`` over ``0 < z + ds < width``."""
    lo = -ds
    return integrate.quad(lambda z: zolotarev_pdf(z, alpha, beta), lo, lo + width,
                          weight="alg", wvar=(p, 0.0), **_QUAD)[0]


def _standard_plus_by_density(p, alpha, beta, ds):
    """``E (Z + ds)_+^p`` by integrating against the standard density."""
    lo = -ds
    big_t = TAIL_START + abs(ds)
    first = lo + 1.0
    total = _near_origin(p, alpha, beta, ds, 1.0)
    inner = sorted({v for v in (-5.0, -1.0, 0.0, 1.0, 2.0, 5.0, 10.0, 20.0) if first < v < big_t})
    edges = [first, *inner, big_t]
    for s, t in zip(edges[:-1], edges[1:]):
        total += integrate.quad(lambda z: (z - lo) ** p * zolotarev_pdf(z, alpha, beta),
                                s, t, **_QUAD)[0]
    return total + _upper_tail(p, alpha, beta, ds, big_t)


def _combine(kind, plus_fn, params):
    if kind == "plus":
        return plus_fn(params)
    minus = plus_fn(params.reflected())
    if kind == "minus":
        return minus
    plus = plus_fn(params)
    return plus + minus if kind == "abs" else plus - minus


def _shifted(params, q):
    params = as_param1(params)
    if q.a != 0.0:
        params = StableParams1(params.alpha, params.beta, params.gamma, params.delta - q.a)
    return params


def moment_by_density_quadrature(params, q: MomentQuery) -> float:
    """Moment of ``X - q.a`` by direct quadrature against the density."""
    params = _shifted(params, q)
    if not -1.0 < q.p < params.alpha:
        raise DomainError(f"p={q.p!r} outside (-1, alpha)")

    def plus(pr):
        v = _standard_plus_by_density(q.p, pr.alpha, pr.beta, delta_star(pr))
        return pr.gamma ** q.p * v

    with _quiet():
        return _combine(q.kind, plus, params)


# ------------------------------------------------- characteristic function

def _sin_minus_id(v):
    if abs(v) < 0.1:
        v2 = v * v
        return -v * v2 * (1.0 / 6 - v2 * (1.0 / 120 - v2 * (1.0 / 5040 - v2 / 362880)))
    return math.sin(v) - v


def _cf_standard_plus(p, alpha, beta, ds):
    """``E (Z + ds)_+^p`` from the characteristic-function integral of ``Z + ds``."""
    if alpha == 1.0:
        def drift(u):
            return -beta * (2.0 / math.pi) * u * math.log(u) if u > 0.0 else 0.0
        slope = abs(ds) + abs(beta)
    else:
        bt = beta * math.tan(HALF_PI * alpha)

        def drift(u):
            return bt * u ** alpha
        slope = abs(ds) + abs(bt) * alpha
    s, c = math.sin(HALF_PI * p), math.cos(HALF_PI * p)
    mode = "low" if p < 1.0 else ("one" if p == 1.0 else "high")

    def integrand(u):
        ua = u ** alpha
        amp = math.exp(-ua)
        psi = ds * u + drift(u)
        one_minus_cos = -math.expm1(-ua) + 2.0 * amp * math.sin(0.5 * psi) ** 2
        if mode == "one":
            return one_minus_cos / (u * u)
        if mode == "low":
            odd = amp * math.sin(psi)
        else:
            # amp sin(psi) - ds u, grouped to avoid cancellation near 0
            odd = math.expm1(-ua) * math.sin(psi) + _sin_minus_id(psi) + drift(u)
        return (c * odd + s * one_minus_cos) * u ** (-p - 1.0)

    big_u = 42.0 ** (1.0 / alpha)
    if alpha == 1.0:
        slope += abs(beta) * (2.0 / math.pi) * (math.log(big_u) + 1.0)
    else:
        slope += abs(bt) * alpha * max(1.0, big_u ** (alpha - 1.0))
    n_pan = max(8, math.ceil(slope * (big_u - 1.0) / math.pi))
    edges = [0.0, 1e-6, 1e-3, 0.1, *np.linspace(1.0, big_u, n_pan + 1)]
    total = sum(integrate.quad(integrand, a, b, **_QUAD)[0] for a, b in zip(edges[:-1], edges[1:]))
    # beyond big_u only the terms free of exp(-u^alpha) survive
    if mode == "one":
        total += 1.0 / big_u
        return 0.5 * ds + total / math.pi
    total += s * big_u ** (-p) / p
    if mode == "high":
        total -= c * ds * big_u ** (1.0 - p) / (p - 1.0)
    return math.gamma(p + 1.0) * total / math.pi


def cf_applicable(alpha: float, p: float) -> bool:
    return 0.0 < p < min(1.0, alpha) or (alpha > 1.0 and 1.0 <= p < alpha)


def moment_by_cf_integral(params, q: MomentQuery) -> float:
    """Moment of ``X - q.a`` from the real-part characteristic-function integrals."""
    params = _shifted(params, q)
    if not cf_applicable(params.alpha, q.p):
        raise DomainError(f"cf integral needs 0 < p < min(1, alpha) or 1 <= p < alpha; got p={q.p!r}")

    def plus(pr):
        return pr.gamma ** q.p * _cf_standard_plus(q.p, pr.alpha, pr.beta, delta_star(pr))

    with _quiet():
        return _combine(q.kind, plus, params)


# ------------------------------------------------------------ Monte Carlo

@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    infinite_variance: bool
    n: int


def _side_values(w, p, ds, big_t, near):
    """Per-sample ``w_+^p`` with the tail zone and the zone next to 0 removed.

    ``w = Z + ds``; the removed zones are ``Z > T`` and ``0 < w < near``.
    """
    keep = w > near if near > 0.0 else w > 0.0
    keep &= w - ds <= big_t
    if p == 0.0:
        return keep.astype(float)
    return np.where(keep, np.abs(w) ** p, 0.0)


def _side_zones(p, alpha, beta, ds, big_t, near):
    total = _upper_tail(p, alpha, beta, ds, big_t) if math.isfinite(big_t) else 0.0
    if near > 0.0:
        total += _near_origin(p, alpha, beta, ds, near)
    return total


def moment_by_monte_carlo(params, q: MomentQuery, n: int = 1_000_000, seed: int = 0) -> MCEstimate:
    """Sample mean of the moment functional over CMS variates.

    When the functional has infinite variance (``2p >= alpha`` or
    ``p <= -1/2``) the sample mean is taken only over the body of the law,
    where the variance is finite: the region beyond ``T = 50 + |delta*|``
    standardized units, and for ``p <= -1/2`` the strip next to 0, are
    integrated against the independent tail series and integral
    representation instead.  ``stderr`` covers the sampled part.
    """
    params = _shifted(params, q)
    if not -1.0 < q.p < params.alpha:
        raise DomainError(f"p={q.p!r} outside (-1, alpha)")
    p = q.p
    heavy_tail = 2.0 * p >= params.alpha
    near = NEAR_ZERO if p <= -0.5 else 0.0
    x = sample(params, n, seed).values / params.gamma  # standardized X - a
    sides = {}
    exact = {}
    for side, pr, w in (("plus", params, x), ("minus", params.reflected(), -x)):
        if q.kind == "plus" and side == "minus" or q.kind == "minus" and side == "plus":
            continue
        ds = delta_star(pr)
        big_t = TAIL_START + abs(ds) if heavy_tail else math.inf
        scale = pr.gamma ** p
        sides[side] = scale * _side_values(w, p, ds, big_t, near)
        with _quiet():
            exact[side] = scale * (_side_zones(p, pr.alpha, pr.beta, ds, big_t, near)
                                   if (heavy_tail or near) else 0.0)
    if q.kind == "signed":
        vals = sides["plus"] - sides["minus"]
        offset = exact["plus"] - exact["minus"]
    else:
        vals = sum(sides.values())
        offset = sum(exact.values())
    est = float(vals.mean() + offset)
    err = float(vals.std(ddof=1) / math.sqrt(vals.size))
    return MCEstimate(est, err, bool(heavy_tail or near), int(n))


# --------------------------------------------------- bivariate simulation

def _philox(seed, stream, chunk):
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), (stream << 32) | chunk]))


def sample_bivariate(atoms, alpha: float, n: int, seed: int = 0, skip_independent: bool = False):
    """``(X1, X2)`` with discrete spectral measure ``sum w_j delta_{s_j}``.

    ``X = sum_j w_j^(1/alpha) A_j s_j`` with ``A_j ~ S(alpha, 1, 1, 0; 1)``
    i.i.d.; at alpha = 1 each term gets the extra ``(2/pi) w_j ln w_j s_j``.
    With ``skip_independent`` the atoms on the s2-axis are left out of X2;
    for alpha > 1 they are independent of X1 with mean zero, so the
    conditional mean is unchanged while the noise drops.
    """
    n = int(n)
    x1 = np.zeros(n)
    x2 = np.zeros(n)
    chunk = 1_000_000
    for j, a in enumerate(atoms):
        if skip_independent and a.s1 == 0.0:
            if alpha <= 1.0:
                raise DomainError("skip_independent needs alpha > 1")
            continue
        w = a.weight
        for c, start in enumerate(range(0, n, chunk)):
            size = min(chunk, n - start)
            rng = _philox(int(seed), j + 1, c)
            v = rng.uniform(-HALF_PI, HALF_PI, size)
            e = rng.standard_exponential(size)
            amp = w ** (1.0 / alpha) * standard_variates(alpha, 1.0, v, e)
            if alpha == 1.0:
                amp = amp + (2.0 / math.pi) * w * math.log(w)
            x1[start:start + size] += a.s1 * amp
            x2[start:start + size] += a.s2 * amp
    return x1, x2


def cond_exp_by_monte_carlo(atoms, alpha: float, x: float, n: int = 10_000_000, seed: int = 0,
                            bandwidth: float | None = None) -> MCEstimate:
    """Local-linear kernel regression of X2 on X1 at ``x``.

    The standard error is the MAD spread of 32 independent block estimates.
    """
    skip = alpha > 1.0
    x1, x2 = sample_bivariate(atoms, alpha, n, seed, skip_independent=skip)
    if bandwidth is None:
        scale = float(np.subtract(*np.percentile(x1, [75, 25])))
        bandwidth = 0.02 * scale
    ests = []
    for b1, b2 in zip(np.array_split(x1, BLOCKS), np.array_split(x2, BLOCKS)):
        t = (b1 - x) / bandwidth
        keep = np.abs(t) < 1.0
        t, y = t[keep], b2[keep]
        k = (1.0 - t * t) ** 2  # biweight
        s0, s1, s2 = k.sum(), (k * t).sum(), (k * t * t).sum()
        r0, r1 = (k * y).sum(), (k * t * y).sum()
        ests.append((s2 * r0 - s1 * r1) / (s0 * s2 - s1 * s1))
    ests = np.array(ests)
    med = float(np.median(ests))
    mad = float(np.median(np.abs(ests - med)))
    return MCEstimate(med, 1.2533 * 1.4826 * mad / math.sqrt(BLOCKS), True, int(n))


def cond_exp_by_quadrature(atoms, alpha: float, x: float) -> float:
    """Exact ``E(X2 | X1 = x)`` when at most two atoms have ``s1 != 0``.

    Each atom contributes ``A_j ~ S(alpha, 1, w_j^(1/alpha), 0; 1)``; fixing
    ``X1 = x`` leaves a one-dimensional integral over the first amplitude.
    Atoms with ``s1 = 0`` are independent of X1 and add their mean, which is
    zero for alpha > 1.
    """
    live = [a for a in atoms if a.s1 != 0.0]
    if len(live) != len(atoms) and alpha <= 1.0:
        raise DomainError("atoms with s1 = 0 need alpha > 1")
    if not live:
        raise DomainError("X1 is degenerate: every atom has s1 = 0")
    if len(live) == 1:
        return live[0].s2 / live[0].s1 * x
    if len(live) > 2:
        raise DomainError("quadrature oracle handles at most two atoms with s1 != 0")
    u, v = live
    pu = StableParams1(alpha, 1.0, u.weight ** (1.0 / alpha), 0.0)
    pv = StableParams1(alpha, 1.0, v.weight ** (1.0 / alpha), 0.0)

    def joint(a):
        return oracle_pdf(a, pu) * oracle_pdf((x - u.s1 * a) / v.s1, pv)

    def second(a):
        return u.s2 * a + v.s2 * (x - u.s1 * a) / v.s1

    pts = [-math.inf, -50.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 50.0, math.inf]
    num = den = 0.0
    with _quiet():
        for s, t in zip(pts[:-1], pts[1:]):
            num += integrate.quad(lambda a: second(a) * joint(a), s, t, limit=200)[0]
            den += integrate.quad(joint, s, t, limit=200)[0]
    return num / den


# ------------------------------------------------------------- reporting

@dataclass(frozen=True)
class VerificationReport:
    analytic: float
    oracle: float
    abs_err: float
    rel_err: float
    oracle_kind: str
    passed: bool
    tolerance: float
    mc_stderr: float | None = None
    experimental: bool = False

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-4
    abs: float = 1e-12
    mc_sigmas: float = 4.0
    mc_n: int = 1_000_000
    seed: int = 0


def make_report(analytic, oracle_value, kind, tol, stderr=None, experimental=False, abs_tol=0.0):
    """``tol`` is relative for quadrature oracles and a count of standard errors for MC."""
    abs_err = abs(analytic - oracle_value)
    rel_err = abs_err / max(abs(oracle_value), 1e-300)
    if kind == "monte_carlo":
        passed = abs_err <= tol * stderr + abs_tol
    else:
        passed = abs_err <= max(tol * abs(oracle_value), abs_tol)
    return VerificationReport(analytic, oracle_value, abs_err, rel_err, kind, bool(passed),
                              tol, stderr, experimental)


def verify(params, q: MomentQuery, tolerances: Tolerances | None = None, cfg=None,
           kinds=ORACLE_KINDS) -> list[VerificationReport]:
    """One report per applicable oracle.  Domain errors propagate; disagreement does not."""
    tol = tolerances or Tolerances()
    params = as_param1(params)
    res = moment(params, q, cfg)
    shifted = _shifted(params, q)
    reports = []
    if "density_quad" in kinds:
        reports.append(make_report(res.value, moment_by_density_quadrature(params, q),
                                   "density_quad", tol.rel, experimental=res.experimental,
                                   abs_tol=tol.abs))
    if "cf_integral" in kinds and cf_applicable(shifted.alpha, q.p):
        reports.append(make_report(res.value, moment_by_cf_integral(params, q),
                                   "cf_integral", tol.rel, experimental=res.experimental,
                                   abs_tol=tol.abs))
    if "monte_carlo" in kinds:
        mc = moment_by_monte_carlo(params, q, tol.mc_n, tol.seed)
        reports.append(make_report(res.value, mc.estimate, "monte_carlo", tol.mc_sigmas,
                                   mc.stderr, res.experimental, tol.abs))
    return reports


def reports_to_jsonl(reports) -> str:
    return "".join(json.dumps(r.to_dict()) + "\n" for r in reports)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    fields = list(VerificationReport.__dataclass_fields__)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\r\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.to_dict())
    return buf.getvalue()
