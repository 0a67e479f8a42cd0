import math

import pytest
from scipy import integrate

from stablemoments.condexp import (
    SpectralAtom, alpha_covariation, cond_exp, cond_exp_coeffs, marginal_scale_skew, read_atoms,
)
from stablemoments.dist import pdf
from stablemoments.oracle import cond_exp_by_quadrature
from stablemoments.params import DomainError, StableParams1

AXES = [SpectralAtom(1, 0, 1.0), SpectralAtom(-1, 0, 1.0), SpectralAtom(0, 1, 1.0), SpectralAtom(0, -1, 1.0)]
THREE = [SpectralAtom(0.6, 0.8, 1.0), SpectralAtom(-1.0, 0.0, 0.5), SpectralAtom(0.0, 1.0, 0.7)]


def pair(a, b, w=1.0):
    return [SpectralAtom(a, b, w), SpectralAtom(-a, -b, w)]


def symmetric(atoms):
    return atoms + [SpectralAtom(-x.s1, -x.s2, x.weight) for x in atoms]


def test_atom_validation():
    with pytest.raises(DomainError):
        SpectralAtom(0.6, 0.6, 1.0)
    with pytest.raises(DomainError):
        SpectralAtom(1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        SpectralAtom(math.nan, 0.0, 1.0)


def test_covariation_examples():
    assert alpha_covariation(AXES, 1.5) == 0.0
    a, b, w = 0.6, 0.8, 0.3
    assert alpha_covariation(pair(a, b, w), 1.5) == pytest.approx(2 * w * b * a ** 0.5, rel=1e-14)
    assert alpha_covariation(pair(0.6, 0.8), 1.0) == pytest.approx(1.6, rel=1e-14)
    with pytest.raises(DomainError):
        alpha_covariation(AXES, 0.8)


def test_coefficient_examples():
    c = cond_exp_coeffs(symmetric([SpectralAtom(0.6, 0.8, 1.0), SpectralAtom(1.0, 0.0, 0.4)]), 1.0)
    assert c.c0 == 0.0 and c.kappa2 == 0.0 and c.beta1 == 0.0 and c.mu1 == 0.0 and c.c2 == 0.0
    c = cond_exp_coeffs(pair(0.6, 0.8, 0.7), 1.5)
    assert c.c1 == pytest.approx(0.8 / 0.6, rel=1e-14)
    assert c.c2 == 0.0
    c = cond_exp_coeffs(AXES, 1.5)
    assert c.c1 == 0.0 and c.c2 == 0.0


def test_marginal():
    gm, b = marginal_scale_skew(THREE, 1.3)
    assert gm == pytest.approx((0.6 ** 1.3 + 0.5) ** (1 / 1.3), rel=1e-14)
    assert b == pytest.approx((0.6 ** 1.3 - 0.5) / (0.6 ** 1.3 + 0.5), rel=1e-14)
    with pytest.raises(DomainError):
        marginal_scale_skew([SpectralAtom(0.0, 1.0, 1.0)], 1.5)


def test_symmetric_linear_example():
    # kappa1 / gamma1^alpha = 0.8 with a symmetric measure
    atoms = symmetric([SpectralAtom(1.0, 0.0, 0.1), SpectralAtom(0.6, 0.8, 0.1 / 0.6 ** 0.5)])
    c = cond_exp_coeffs(atoms, 1.5)
    scale = c.kappa1 / c.gamma1 ** 1.5
    x = 2.0 * 0.8 / scale
    assert cond_exp(atoms, 1.5, x) == pytest.approx(1.6 * x / 2.0 / 0.8 * scale, rel=1e-14)
    assert cond_exp(atoms, 1.5, 2.0) == c.c1 * 2.0


@pytest.mark.parametrize("alpha", [0.7, 1.0, 1.5])
def test_symmetric_linear_and_antisymmetric(alpha):
    atoms = symmetric([SpectralAtom(0.6, 0.8, 1.0), SpectralAtom(1.0, 0.0, 0.4), SpectralAtom(-0.8, 0.6, 0.3)])
    c = cond_exp_coeffs(atoms, alpha)
    assert c.c2 == 0.0 and c.kappa2 == 0.0 and c.beta1 == 0.0 and c.mu1 == 0.0
    # at alpha = 1 the coefficient multiplies x / gamma1; either way the slope is kappa1 / gamma1^alpha
    slope = c.kappa1 / c.gamma1 ** alpha
    for x in [-4.0, -0.3, 0.0, 1.1, 7.0]:
        assert cond_exp(atoms, alpha, x) == pytest.approx(slope * x, rel=1e-14, abs=1e-300)
        assert cond_exp(atoms, alpha, -x) == pytest.approx(-cond_exp(atoms, alpha, x), abs=1e-9)


@pytest.mark.parametrize("alpha", [0.8, 1.0, 1.7])
def test_degenerate_pair(alpha):
    for x in [-3.0, -1.0, 0.5, 2.0]:
        assert cond_exp(pair(0.6, 0.8), alpha, x) == pytest.approx(0.8 / 0.6 * x, rel=1e-6)
    assert cond_exp(pair(0.6, 0.8), 1.7, 1.0) == pytest.approx(4 / 3, rel=1e-12)


def test_three_atom_matches_exact_quadrature():
    assert cond_exp(THREE, 1.3, 0.5) == pytest.approx(cond_exp_by_quadrature(THREE, 1.3, 0.5), rel=1e-9)
    assert cond_exp(THREE, 1.3, 0.5) == pytest.approx(-1.01690187464555, rel=1e-10)


@pytest.mark.parametrize("atoms", [
    [SpectralAtom(0.6, 0.8, 1.0), SpectralAtom(-1.0, 0.0, 0.5)],
    [SpectralAtom(0.8, -0.6, 0.7), SpectralAtom(1.0, 0.0, 0.4), SpectralAtom(0.0, 1.0, 0.3)],
    [SpectralAtom(0.6, 0.8, 1.0), SpectralAtom(-0.6, 0.8, 1.0)],
])
@pytest.mark.parametrize("alpha", [0.7, 1.0, 1.6])
def test_against_exact_quadrature(atoms, alpha):
    if alpha <= 1.0 and any(a.s1 == 0.0 for a in atoms):
        with pytest.raises(DomainError):
            cond_exp(atoms, alpha, 0.3)
        return
    for x in [-1.5, 0.3, 2.0]:
        assert cond_exp(atoms, alpha, x) == pytest.approx(cond_exp_by_quadrature(atoms, alpha, x), rel=1e-7, abs=1e-10)


def test_alpha_one_variants():
    atoms = [SpectralAtom(0.6, 0.8, 1.0), SpectralAtom(-1.0, 0.0, 0.5)]
    exact = cond_exp_by_quadrature(atoms, 1.0, 0.5)
    assert cond_exp(atoms, 1.0, 0.5, "derived") == pytest.approx(exact, rel=1e-8)
    for v in ["printed", "shift_consistent"]:
        assert abs(cond_exp(atoms, 1.0, 0.5, v) - exact) > 1e-2
    with pytest.raises(DomainError):
        cond_exp(atoms, 1.0, 0.5, "guess")


def test_alpha_one_symmetric_marginal_needs_location():
    # beta1 = 0 but mu1 != 0: density argument is shifted by mu1
    atoms = [SpectralAtom(0.6, 0.8, 1.0), SpectralAtom(-0.8, 0.6, 0.6 ** 1 / 0.8)]
    c = cond_exp_coeffs(atoms, 1.0)
    assert c.beta1 == pytest.approx(0.0, abs=1e-15)
    assert c.mu1 != 0.0
    for x in [-1.0, 0.4]:
        assert cond_exp(atoms, 1.0, x) == pytest.approx(cond_exp_by_quadrature(atoms, 1.0, x), rel=1e-8)


def test_tower_property():
    alpha = 1.8
    c = cond_exp_coeffs(THREE, alpha)
    law = StableParams1(alpha, c.beta1, c.gamma1, 0.0)
    lim = 50 * c.gamma1
    body, _ = integrate.quad(lambda x: cond_exp(THREE, alpha, x, coeffs=c) * pdf(x, law),
                             -lim, lim, points=[0.0], limit=400)
    # beyond the window one big jump dominates: E[X2; |X1| > L] ~ alpha C kappa2 L^(1-alpha)/(alpha-1)
    tail_c = 2 * math.gamma(alpha) * math.sin(math.pi * alpha / 2) / math.pi
    tail = alpha * tail_c * c.kappa2 * lim ** (1 - alpha) / (alpha - 1)
    assert abs(body + tail) < 1e-3
    assert abs(body) > 1e-3  # the tail term is doing real work


def test_read_atoms(tmp_path):
    f = tmp_path / "atoms.csv"
    f.write_text("# spectral atoms\ns1,s2,weight\n0.6,0.8,1\n\n-1,0,0.5\n0,1,0.7\n")
    assert read_atoms(f) == THREE
    bad = tmp_path / "bad.csv"
    bad.write_text("0.6,0.8\n")
    with pytest.raises(DomainError):
        read_atoms(bad)
    empty = tmp_path / "empty.csv"
    empty.write_text("# nothing\n")
    with pytest.raises(DomainError):
        read_atoms(empty)


def test_outside_support_is_rejected():
    atoms = [SpectralAtom(1.0, 0.0, 1.0), SpectralAtom(0.6, 0.8, 0.5)]
    with pytest.raises(DomainError):
        cond_exp(atoms, 0.5, -1.0)
