import math

import numpy as np
import pytest

from snrmm.estimators import EstimatorKind, Tuning
from snrmm.minimax import Regime
from snrmm.risk import SparseSpace, sup_risk
from snrmm.tuning import (
    hard_tuning_window,
    optimize_lambda,
    optimize_lambda_gamma,
    recommended_tuning,
)

# 50-digit evaluation of 1/(2e-6 * 4 * e^6) - 1, frozen
GAMMA_REC_1E6_MU2 = 308.84402208329480288


def _space(eps, mu, k=10, sigma=1.0):
    n = int(round(k / eps))
    return SparseSpace(n=n, k=k, tau=mu * sigma, sigma=sigma)


def test_linear_optimum_closed_form():
    sp = SparseSpace(n=1000, k=10, tau=1.0, sigma=1.0)
    res = optimize_lambda(EstimatorKind.LINEAR, sp)
    em = sp.eps * sp.mu**2
    assert res.tuning.lam == pytest.approx(1.0 / em, rel=1e-4)
    assert res.value == pytest.approx(sp.n * sp.sigma**2 * em / (1 + em), rel=1e-6)
    assert res.boundary is None


@pytest.mark.parametrize("seed", range(10))
def test_linear_optimum_random_spaces(seed):
    rng = np.random.default_rng(3000 + seed)
    n = int(rng.integers(200, 50_000))
    k = int(rng.integers(1, max(2, n // 20)))
    tau = float(rng.uniform(0.05, 20.0))
    sigma = float(rng.uniform(0.2, 5.0))
    sp = SparseSpace(n=n, k=k, tau=tau, sigma=sigma)
    res = optimize_lambda(EstimatorKind.LINEAR, sp)
    em = sp.eps * sp.mu**2
    assert res.tuning.lam == pytest.approx(1.0 / em, rel=1e-4)
    assert res.value == pytest.approx(sp.n * sp.sigma**2 * em / (1 + em), rel=1e-6)


@pytest.mark.parametrize("eps", [1e-4, 1e-6])
@pytest.mark.parametrize("mu", [0.1, 0.3])
def test_soft_optimum_in_window(eps, mu):
    res = optimize_lambda(EstimatorKind.SOFT, _space(eps, mu))
    assert res.boundary is None
    lam_mu = res.tuning.lam * mu
    lo = math.log(2.0 / eps) + mu * mu / 2.0 - 2.0 * math.log(math.log(2.0 / eps))
    hi = math.log(2.0 / eps) + mu * mu / 2.0
    assert lo < lam_mu < hi


def test_soft_interior_for_weak_signals():
    for eps in (1e-3, 1e-4):
        mu = math.sqrt(math.log(1 / eps)) / 2.0
        res = optimize_lambda(EstimatorKind.SOFT, _space(eps, mu))
        assert res.boundary is None


def test_soft_never_worse_than_universal_threshold():
    sp = SparseSpace(n=1000, k=500, tau=10.0, sigma=1.0)  # eps = 0.5, mu = 10
    res = optimize_lambda(EstimatorKind.SOFT, sp)
    at_nu = sup_risk(EstimatorKind.SOFT, Tuning(lam=sp.sigma * sp.nu), sp).value
    assert res.value <= at_nu * (1 + 1e-12)


@pytest.mark.parametrize(
    "kind", [EstimatorKind.SOFT, EstimatorKind.HARD, EstimatorKind.LINEAR]
)
def test_optimizer_dominates_random_tunings(kind):
    rng = np.random.default_rng(99)
    spaces = [
        SparseSpace(n=2000, k=20, tau=2.0, sigma=1.0),
        SparseSpace(n=50_000, k=5, tau=6.0, sigma=2.0),
        SparseSpace(n=500, k=100, tau=0.5, sigma=0.7),
    ]
    for sp in spaces:
        res = optimize_lambda(kind, sp)
        for _ in range(20):
            lam = float(rng.uniform(0.0, 4.0 * (sp.mu + sp.nu)))
            if kind is EstimatorKind.LINEAR:
                lam = float(rng.uniform(0.0, 3.0 / (sp.eps * sp.mu**2)))
            other = sup_risk(kind, Tuning(lam=lam), sp).value
            assert res.value <= other * (1 + 1e-9)


def test_optimizer_rejects_unsupported_kind():
    sp = SparseSpace(n=100, k=5, tau=1.0, sigma=1.0)
    with pytest.raises(ValueError):
        optimize_lambda(EstimatorKind.SOFT_LINEAR, sp)
    with pytest.raises(ValueError):
        optimize_lambda(EstimatorKind.ZERO, sp)


def test_value_matches_sup_risk_at_returned_tuning():
    sp = SparseSpace(n=5000, k=50, tau=3.0, sigma=2.0)
    for kind in (EstimatorKind.SOFT, EstimatorKind.HARD, EstimatorKind.LINEAR):
        res = optimize_lambda(kind, sp)
        at = sup_risk(kind, res.tuning, sp).value
        assert res.value == pytest.approx(at, rel=1e-9)


def test_soft_linear_nests_soft_and_linear():
    sp = _space(1e-4, 2.0)
    res = optimize_lambda_gamma(sp)
    soft = optimize_lambda(EstimatorKind.SOFT, sp)
    lin = optimize_lambda(EstimatorKind.LINEAR, sp)
    assert res.value <= min(soft.value, lin.value) * (1 + 1e-12)
    at = sup_risk(EstimatorKind.SOFT_LINEAR, res.tuning, sp).value
    assert res.value == pytest.approx(at, rel=1e-9)


def test_soft_linear_beats_recommended_pair():
    sp = _space(1e-4, 2.0)
    res = optimize_lambda_gamma(sp)
    rec = recommended_tuning(EstimatorKind.SOFT_LINEAR, sp, Regime.MODERATE)
    at_rec = sup_risk(EstimatorKind.SOFT_LINEAR, rec, sp).value
    assert res.value <= at_rec * (1 + 1e-12)


def test_soft_linear_weak_signal_tracks_linear():
    sp = _space(1e-4, 0.1, k=100)
    res = optimize_lambda_gamma(sp)
    lin = optimize_lambda(EstimatorKind.LINEAR, sp)
    assert res.value <= lin.value * (1 + 1e-12)
    assert res.value == pytest.approx(lin.value, rel=1e-3)


def test_recommended_universal_threshold():
    # integer (n, k) cannot hit eps = e^-8 exactly; large k gets ~1e-10 close
    k = 10**6
    sp = SparseSpace(n=int(round(k * math.exp(8.0))), k=k, tau=5.0, sigma=1.0)
    for kind in (EstimatorKind.SOFT, EstimatorKind.HARD):
        tun = recommended_tuning(kind, sp, Regime.HIGH)
        assert tun.lam == pytest.approx(4.0, rel=1e-9)


def test_recommended_linear_low_snr():
    sp = SparseSpace(n=10_000, k=100, tau=0.5, sigma=1.0)  # eps = 0.01, mu = 0.5
    tun = recommended_tuning(EstimatorKind.LINEAR, sp, Regime.LOW)
    assert tun.lam == pytest.approx(400.0, rel=1e-12)
    with pytest.raises(ValueError):
        recommended_tuning(EstimatorKind.LINEAR, sp, Regime.HIGH)


def test_recommended_soft_linear_moderate():
    sp = _space(1e-6, 2.0)
    tun = recommended_tuning(EstimatorKind.SOFT_LINEAR, sp, Regime.MODERATE)
    assert tun.lam == pytest.approx(4.0, rel=1e-12)
    assert tun.gamma == pytest.approx(GAMMA_REC_1E6_MU2, rel=1e-12)
    with pytest.raises(ValueError):
        recommended_tuning(EstimatorKind.SOFT_LINEAR, sp, Regime.LOW)


def test_recommended_soft_linear_clamps_negative_gamma():
    # strong signal relative to sparsity drives the closed form below zero
    sp = SparseSpace(n=100, k=50, tau=1.5, sigma=1.0)
    with pytest.warns(UserWarning):
        tun = recommended_tuning(EstimatorKind.SOFT_LINEAR, sp, Regime.MODERATE)
    assert tun.gamma == 0.0


def test_recommended_rejects_zero_estimator():
    sp = _space(1e-4, 1.0)
    with pytest.raises(ValueError):
        recommended_tuning(EstimatorKind.ZERO, sp, Regime.LOW)


def test_hard_window_arithmetic():
    sp = _space(math.exp(-32.0), 100.0)  # nu = 8
    lo, hi = hard_tuning_window(sp, c1=0.5, c2=1.0)
    assert lo == pytest.approx(64.0 - 0.5 * math.log(math.log(8.0)), rel=1e-12)
    assert hi == pytest.approx(64.0 + 8.0 * math.sqrt(2.0 * math.log(8.0)), rel=1e-12)


def test_hard_window_degenerate_lower_edge():
    sp = _space(math.exp(-32.0), 100.0)
    lo, _ = hard_tuning_window(sp, c1=0.0, c2=1.0)
    assert lo == 64.0


def test_hard_window_contains_universal_threshold():
    for eps in (math.exp(-16.0), math.exp(-32.0), math.exp(-64.0)):
        sp = _space(eps, 100.0)
        for c1, c2 in [(0.0, 0.5), (0.5, 1.0), (0.99, 3.0)]:
            lo, hi = hard_tuning_window(sp, c1, c2)
            assert lo <= sp.nu**2 <= hi


def test_hard_window_domain_errors():
    sp = _space(math.exp(-32.0), 100.0)
    with pytest.raises(ValueError):
        hard_tuning_window(sp, c1=1.0, c2=1.0)
    with pytest.raises(ValueError):
        hard_tuning_window(sp, c1=0.0, c2=0.0)
    # nu barely above e is required
    shallow = SparseSpace(n=100, k=50, tau=1.0, sigma=1.0)
    with pytest.raises(ValueError):
        hard_tuning_window(shallow, c1=0.5, c2=1.0)
