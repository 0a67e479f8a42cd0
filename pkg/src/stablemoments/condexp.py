"""Conditional expectation ``E(X2 | X1 = x)`` for a jointly stable pair.

The pair has zero shift and a discrete spectral measure given as a list of
atoms ``(s1, s2, weight)`` on the unit circle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .gfun import g, g_tilde, h
from .params import DomainError, check_alpha
from .quad import DEFAULT_CONFIG, QuadConfig

TWO_OVER_PI = 2.0 / math.pi
VARIANTS = ("derived", "printed", "shift_consistent")
DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class SpectralAtom:
    s1: float
    s2: float
    weight: float

    def __post_init__(self):
        if not (math.isfinite(self.s1) and math.isfinite(self.s2) and math.isfinite(self.weight)):
            raise DomainError("atom coordinates and weight must be finite")
        if abs(self.s1 * self.s1 + self.s2 * self.s2 - 1.0) > 1e-12:
            raise DomainError(f"atom ({self.s1}, {self.s2}) is not on the unit circle")
        if not self.weight > 0.0:
            raise DomainError(f"atom weight must be positive, got {self.weight!r}")


@dataclass(frozen=True)
class CondExpCoefficients:
    c0: float
    c1: float
    c2: float
    kappa1: float
    kappa2: float
    mu1: float
    beta1: float
    gamma1: float


def read_atoms(path) -> list[SpectralAtom]:
    """Read ``s1,s2,weight`` lines; blank lines and ``#`` comments are skipped."""
    atoms = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                s1, s2, w = (float(v) for v in row)
            except ValueError:
                if not atoms and row[0].strip().lower() == "s1":
                    continue  # header
                raise DomainError(f"bad atom line {','.join(row)!r}; expected s1,s2,weight")
            atoms.append(SpectralAtom(s1, s2, w))
    if not atoms:
        raise DomainError(f"no atoms in {path}")
    return atoms


def _signed_power(a: float, q: float) -> float:
    if a == 0.0:
        return 0.0
    return math.copysign(abs(a) ** q, a)


def _check_atoms(atoms, alpha):
    if not atoms:
        raise DomainError("spectral measure needs at least one atom")
    if alpha <= 1.0 and any(a.s1 == 0.0 for a in atoms):
        # |s1|^(alpha-1) and log|s1| blow up; the conditional mean need not exist
        raise DomainError("atoms with s1 = 0 are not supported when alpha <= 1")


def alpha_covariation(atoms, alpha: float) -> float:
    """``[X2, X1]_alpha = sum w s2 s1^<alpha-1>`` (``s2 sign(s1)`` at alpha = 1)."""
    alpha = check_alpha(alpha)
    if not atoms:
        raise DomainError("spectral measure needs at least one atom")
    if alpha < 1.0 and any(a.s1 == 0.0 for a in atoms):
        raise DomainError("atoms with s1 = 0 make the alpha-covariation diverge when alpha < 1")
    return math.fsum(a.weight * a.s2 * _signed_power(a.s1, alpha - 1.0) for a in atoms)


def marginal_scale_skew(atoms, alpha: float):
    """``(gamma1, beta1)`` of ``X1`` from the projection of the spectral measure."""
    alpha = check_alpha(alpha)
    mass = math.fsum(a.weight * abs(a.s1) ** alpha for a in atoms)
    if mass <= 0.0:
        raise DomainError("X1 is degenerate: every atom has s1 = 0")
    # fsum makes antipodal pairs cancel exactly, so symmetric measures give zeros
    skew = math.fsum(a.weight * _signed_power(a.s1, alpha) for a in atoms) / mass
    return mass ** (1.0 / alpha), max(-1.0, min(1.0, skew))


def cond_exp_coeffs(atoms, alpha: float) -> CondExpCoefficients:
    alpha = check_alpha(alpha)
    _check_atoms(atoms, alpha)
    gamma1, beta1 = marginal_scale_skew(atoms, alpha)
    kappa1 = alpha_covariation(atoms, alpha)
    kappa2 = math.fsum(a.weight * a.s2 * abs(a.s1) ** (alpha - 1.0) for a in atoms if a.s1 != 0.0)
    mu1 = -TWO_OVER_PI * math.fsum(a.weight * a.s1 * math.log(abs(a.s1)) for a in atoms if a.s1 != 0.0)
    c0 = 0.0
    if alpha == 1.0:
        c0 = -TWO_OVER_PI * math.fsum(a.weight * a.s2 * math.log(abs(a.s1)) for a in atoms)
        if beta1 != 0.0:
            c1 = kappa2 / beta1
            c2 = (kappa2 - beta1 * kappa1) / beta1
        else:
            c1 = kappa1
            c2 = -2.0 * kappa2 / math.pi
    else:
        t = math.tan(math.pi * alpha / 2.0)
        denom = gamma1 ** alpha * (1.0 + beta1 * beta1 * t * t)
        c1 = (kappa1 + beta1 * t * t * kappa2) / denom
        c2 = t * (kappa2 - beta1 * kappa1) / denom
    return CondExpCoefficients(c0, c1, c2, kappa1, kappa2, mu1, beta1, gamma1)


def _density_guard(value: float, x: float):
    if not value > DENSITY_FLOOR:
        raise DomainError(f"x={x!r} is outside the support of X1 (density {value!r})")
    return value


def cond_exp(atoms, alpha: float, x: float, variant: str = "derived",
             cfg: QuadConfig | None = None, coeffs: CondExpCoefficients | None = None) -> float:
    """``E(X2 | X1 = x)``.

    ``variant`` only matters at alpha = 1: ``"derived"`` standardizes both
    ``g~_1`` and ``g_1`` at the argument of the X1 density and subtracts the
    ``c2`` term; ``"printed"`` evaluates the denominator at ``x / gamma1`` and
    adds it; ``"shift_consistent"`` adds it with the common argument.
    """
    alpha = check_alpha(alpha)
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    cfg = cfg or DEFAULT_CONFIG
    c = coeffs or cond_exp_coeffs(atoms, alpha)
    gm, b1 = c.gamma1, c.beta1

    if alpha < 1.0 and abs(b1) == 1.0 and b1 * x < 0.0:
        raise DomainError(f"x={x!r} is outside the half-line support of X1")

    if alpha != 1.0:
        if c.c2 == 0.0:
            return c.c1 * x
        y = x / gm
        dens = _density_guard(g(1.0, y, alpha, b1, cfg), x)
        return c.c1 * x + c.c2 * (1.0 - y * g_tilde(1.0, y, alpha, b1, cfg)) / (dens / gm)

    y = (x - c.mu1) / gm
    if b1 != 0.0:
        ys = y - TWO_OVER_PI * b1 * math.log(gm)
        num = g_tilde(1.0, ys, 1.0, b1, cfg)
        at = x / gm if variant == "printed" else ys
        dens = _density_guard(g(1.0, at, 1.0, b1, cfg), x)
        sign = -1.0 if variant == "derived" else 1.0
        return c.c0 + c.c1 * y + sign * c.c2 * num / dens
    at = x / gm if variant == "printed" else y
    dens = _density_guard(g(1.0, at, 1.0, 0.0, cfg), x)
    if c.c2 == 0.0:
        return c.c0 + c.c1 * y
    num = (1.0 - math.log(gm)) * g(1.0, y, 1.0, 0.0, cfg) + h(y, cfg)
    return c.c0 + c.c1 * y + c.c2 * num / dens
