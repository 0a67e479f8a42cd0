"""Conditional mean E(X2 | X1 = x) for a jointly stable pair with two spectral atoms.

With two atoms the pair is a linear map of two independent stable variables,
so the conditional mean also has an exact one-dimensional quadrature form.
"""

import math

from stablemoments import SpectralAtom, cond_exp, cond_exp_coeffs
from stablemoments.oracle import cond_exp_by_quadrature

r = 1 / math.sqrt(2)
atoms = [SpectralAtom(1.0, 0.0, 1.0), SpectralAtom(-r, r, 0.5)]

for alpha in (0.8, 1.0, 1.5):
    c = cond_exp_coeffs(atoms, alpha)
    print(f"alpha={alpha}: gamma1={c.gamma1:.4f} beta1={c.beta1:.4f} c1={c.c1:.4f} c2={c.c2:.4f}")
    for x in (-2.0, 0.0, 1.0, 3.0):
        fast = cond_exp(atoms, alpha, x)
        ref = cond_exp_by_quadrature(atoms, alpha, x)
        print(f"  x={x:+.1f}: {fast:+.10f}  quadrature {ref:+.10f}")
