import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemoments.params import DomainError
from stablemoments.quad import QuadConfig, choose_cutoff, integrate_damped_oscillatory


def integrate(fn, freq=0.0, alpha=1.0, d=1.0, cfg=None, **kw):
    return integrate_damped_oscillatory(fn, freq, alpha, d, cfg, **kw)


def test_laplace_examples():
    assert integrate(lambda r: np.ones_like(r)).value == pytest.approx(1.0, rel=1e-12)
    assert integrate(np.cos, 1.0).value == pytest.approx(0.5, rel=1e-12)
    assert integrate(lambda r: np.sin(2 * r), 2.0).value == pytest.approx(0.4, rel=1e-12)


def test_result_fields():
    res = integrate(np.cos, 1.0)
    assert res.converged
    assert res.error_estimate >= 0.0
    assert res.error_estimate <= max(1e-10, 1e-8 * abs(res.value))
    assert res.subdivisions_used >= 1


def test_power_weight_and_small_alpha():
    # int r^(d-1) exp(-r^alpha) dr = Gamma(d/alpha)/alpha
    for alpha, d in [(0.3, 1.0), (0.3, 0.4), (0.7, 2.5), (1.8, 0.2)]:
        res = integrate(lambda r: np.ones_like(r), 0.0, alpha, d)
        assert res.value == pytest.approx(math.gamma(d / alpha) / alpha, rel=1e-10)


def test_choose_cutoff_examples():
    assert choose_cutoff(1.0, 1.0, 1e-16) == pytest.approx(36.84, abs=5e-3)
    assert choose_cutoff(0.5, 1.0, 1e-16) == pytest.approx(36.8413614879 ** 2, rel=1e-12)
    # R exp(-R) at the cutoff is 1e-16 of its peak value 1/e
    r = choose_cutoff(1.0, 2.0, 1e-16)
    assert r == pytest.approx(41.5687091892, rel=1e-10)
    assert r * math.exp(-r) == pytest.approx(1e-16 * math.exp(-1.0), rel=1e-9)


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        choose_cutoff(2.0, 1.0, 1e-16)
    with pytest.raises(DomainError):
        integrate(lambda r: np.ones_like(r), 0.0, 1.0, -0.5)
    with pytest.raises(ValueError):
        QuadConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadConfig(max_subdivisions=0)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.0, 20.0), st.floats(0.0, 20.0))
def test_linearity(a, b, u, v):
    f = integrate(lambda r: np.cos(u * r), u)
    h = integrate(lambda r: np.sin(v * r), v)
    both = integrate(lambda r: a * np.cos(u * r) + b * np.sin(v * r), max(u, v))
    bound = abs(a) * f.error_estimate + abs(b) * h.error_estimate + both.error_estimate + 1e-14
    assert abs(both.value - (a * f.value + b * h.value)) <= bound


@pytest.mark.parametrize("x", [0.1, 1.0, 10.0, 100.0])
def test_refinement_does_not_hurt(x):
    coarse = QuadConfig(abs_tol=1e-8, rel_tol=1e-6)
    fine = QuadConfig(abs_tol=5e-9, rel_tol=5e-7)
    for fn, exact in [(lambda r: np.cos(x * r), 1 / (1 + x * x)),
                      (lambda r: np.sin(x * r), x / (1 + x * x))]:
        e1 = abs(integrate(fn, x, cfg=coarse).value - exact)
        e2 = abs(integrate(fn, x, cfg=fine).value - exact)
        # both sit at roundoff for these integrands; allow a few ulps of slack
        assert e2 <= max(e1, 4e-15)


def test_cost_linear_in_frequency():
    cfg = QuadConfig(max_subdivisions=50_000)
    counts = {}
    for x in [100.0, 200.0, 400.0, 800.0]:
        res = integrate(lambda r: np.cos(x * r), x, cfg=cfg)
        assert res.converged
        assert res.value == pytest.approx(1 / (1 + x * x), abs=1e-13)
        counts[x] = res.subdivisions_used
    for lo, hi in [(100.0, 200.0), (200.0, 400.0), (400.0, 800.0)]:
        assert counts[hi] <= 2.5 * counts[lo]


def test_budget_exhaustion_reports_not_converged():
    res = integrate(lambda r: np.cos(3000 * r), 3000.0, cfg=QuadConfig(max_subdivisions=200))
    assert not res.converged
    assert math.isfinite(res.value)
