import math

import numpy as np
import pytest

from snrmm.gaussian import (
    QuadratureError,
    TailSeries,
    gauss_expect,
    mills_bound,
    phi,
    upper_tail,
)

# high-precision reference values (50-digit evaluation, frozen)
PHI_0 = 0.39894228040143267794
PHI_1 = 0.24197072451914334980
Q_1 = 0.15865525393145705141
MILLS_0_2 = 0.026995483256594025975


def test_phi_at_zero():
    assert phi(0.0) == pytest.approx(PHI_0, rel=1e-15)


def test_phi_at_one():
    assert phi(1.0) == pytest.approx(PHI_1, rel=1e-15)


@pytest.mark.parametrize("x", [0.3, 1.7, 4.0, 7.5])
def test_phi_symmetry(x):
    assert phi(x) == phi(-x)


def test_phi_positive_on_grid():
    xs = np.linspace(-30, 30, 201)
    assert np.all(phi(xs) > 0)


def test_upper_tail_at_zero():
    assert upper_tail(0.0) == 0.5


def test_upper_tail_at_one():
    assert upper_tail(1.0) == pytest.approx(Q_1, rel=1e-14)


def test_upper_tail_far_right_no_overflow():
    for x in (40.0, 100.0, 1e6):
        v = upper_tail(x)
        assert 0.0 <= v < 1e-300
        assert not math.isnan(v)


def test_upper_tail_strictly_decreasing():
    xs = np.linspace(-8, 37, 500)
    q = upper_tail(xs)
    assert np.all(np.diff(q) < 0)


def test_upper_tail_relative_accuracy():
    # reference values from a 50-digit erfc evaluation
    refs = {
        -8.0: 0.9999999999999993779,
        -3.0: 0.99865010196836990547,
        2.0: 0.0227501319481792072,
        5.0: 2.8665157187919391167e-07,
        10.0: 7.619853024160526066e-24,
        20.0: 2.7536241186062336951e-89,
        30.0: 4.9067139271481870595e-198,
        37.0: 5.7255712225245768227e-300,
    }
    for x, ref in refs.items():
        assert upper_tail(x) == pytest.approx(ref, rel=1e-14)


def test_mills_zero_order_is_density_over_lam():
    for lam in (0.5, 1.0, 2.0, 4.0):
        assert mills_bound(0, lam) == pytest.approx(phi(lam) / lam, rel=1e-15)


def test_mills_frozen_value():
    assert mills_bound(0, 2.0) == pytest.approx(MILLS_0_2, rel=1e-15)


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0, 2.0, 4.0, 8.0])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_mills_sandwich(lam, k):
    q = upper_tail(lam)
    assert mills_bound(2 * k + 1, lam) <= q <= mills_bound(2 * k, lam)


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0, 2.0, 4.0, 8.0])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_mills_alternating_orders(lam, k):
    assert mills_bound(2 * k + 1, lam) <= mills_bound(2 * k, lam)


def test_mills_rejects_nonpositive_lam():
    with pytest.raises(ValueError):
        mills_bound(0, 0.0)
    with pytest.raises(ValueError):
        mills_bound(2, -1.5)


def test_tail_series_wraps_mills():
    ts = TailSeries(order=3)
    assert ts.value_at(1.7) == mills_bound(3, 1.7)
    with pytest.raises(ValueError):
        TailSeries(order=-1)


def test_gauss_expect_normalization():
    assert gauss_expect(lambda z: np.ones_like(z)) == pytest.approx(1.0, abs=1e-12)


def test_gauss_expect_variance():
    assert gauss_expect(lambda z: z * z) == pytest.approx(1.0, abs=1e-10)


def test_gauss_expect_odd_integrand():
    assert gauss_expect(lambda z: z) == pytest.approx(0.0, abs=1e-10)


def test_gauss_expect_breakpoints_kinked_integrand():
    lam = 1.3
    val = gauss_expect(
        lambda z: np.maximum(np.abs(z) - lam, 0.0) ** 2, breakpoints=(lam, -lam)
    )
    # E max(|z|-lam, 0)^2 = 2[(1+lam^2)Q(lam) - lam*phi(lam)]
    expect = 2 * ((1 + lam**2) * upper_tail(lam) - lam * phi(lam))
    assert val == pytest.approx(expect, abs=1e-10)


def test_gauss_expect_rejects_narrow_window():
    with pytest.raises(ValueError):
        gauss_expect(lambda z: z, halfwidth=4.0)


def test_gauss_expect_budget_exhaustion_carries_estimate():
    # violently oscillatory integrand with a tiny budget
    with pytest.raises(QuadratureError) as err:
        gauss_expect(lambda z: np.sin(4000.0 * z) * z, tol=1e-14, max_nodes=2000)
    assert math.isfinite(err.value.estimate)
    assert err.value.error_bound > 0
