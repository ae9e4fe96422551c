"""Exact one-dimensional risks, their oracles, and worst-case risk over the space.

All one-dimensional risk functions are for unit noise: the observation is
mu + z with z standard normal, and the mean squared error of the estimate is
returned.  Rescaling to general noise levels happens in `sup_risk`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .estimators import EstimatorKind, Tuning, apply
from .gaussian import gauss_expect, log_phi, phi, tail_to_density_ratio, upper_tail
from .search import golden_section_min

# Above this threshold-to-signal gap the density factors underflow float64
# and the scaled (log-domain) forms take over.
_PLAIN_LIMIT = 30.0

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SparseSpace:
    """Parameter space: n-vectors with at most k nonzeros and ||theta||_2^2 <= k*tau^2.

    sigma is the per-coordinate noise level.  a_bound, when present, adds the
    sup-norm cap ||theta||_inf <= a_bound * tau (must exceed 1).
    """

    n: int
    k: int
    tau: float
    sigma: float
    a_bound: Optional[float] = None

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be positive integers")
        if self.k > self.n:
            raise ValueError(f"k={self.k} exceeds n={self.n}")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.a_bound is not None and not self.a_bound > 1:
            raise ValueError("a_bound must exceed 1")

    @property
    def eps(self) -> float:
        return self.k / self.n

    @property
    def mu(self) -> float:
        return self.tau / self.sigma

    @property
    def nu(self) -> float:
        """Universal threshold scale sqrt(2 log(1/eps))."""
        if self.eps >= 1:
            return 0.0
        return math.sqrt(2.0 * math.log(1.0 / self.eps))


@dataclass(frozen=True)
class RiskReport:
    value: float
    method: str  # closed_form | quadrature | monte_carlo
    error_bound: float

    def __post_init__(self):
        if self.method not in ("closed_form", "quadrature", "monte_carlo"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.value < 0:
            raise ValueError("risk must be non-negative")


# ---------------------------------------------------------------------------
# soft-threshold moments: E S, E S^2 with S = soft(mu + z, lam)


def _soft_moment1(lam, mu):
    a = lam - mu
    b = lam + mu
    return (phi(a) - a * upper_tail(a)) + (b * upper_tail(b) - phi(b))


def _soft_moment2(lam, mu):
    a = lam - mu
    b = lam + mu
    qa, qb = upper_tail(a), upper_tail(b)
    return ((1.0 + a * a) * qa - a * phi(a)) + ((1.0 + b * b) * qb - b * phi(b))


def risk_soft(lam, mu):
    """MSE of soft thresholding at threshold lam, signal mu, unit noise."""
    lam = np.asarray(lam, dtype=float)
    mu = np.abs(np.asarray(mu, dtype=float))  # risk is even in mu
    out = mu * mu - 2.0 * mu * _soft_moment1(lam, mu) + _soft_moment2(lam, mu)
    return float(out) if out.ndim == 0 else out


def risk_hard(lam, mu):
    """MSE of hard thresholding at threshold lam, signal mu, unit noise."""
    lam = np.asarray(lam, dtype=float)
    mu = np.abs(np.asarray(mu, dtype=float))  # risk is even in mu
    a = lam - mu
    b = lam + mu
    # Phi(a) - Phi(-b) written through upper tails: Q(mu - lam) - Q(mu + lam)
    mass = upper_tail(-a) - upper_tail(b)
    out = (mu * mu - 1.0) * mass + 1.0 + a * phi(a) + b * phi(b)
    return float(out) if out.ndim == 0 else out


def risk_linear(lam, mu):
    """MSE of the linear shrinker y/(1+lam): exact bias-variance split."""
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    w = 1.0 / (1.0 + lam)
    out = (1.0 - w) * (1.0 - w) * mu * mu + w * w
    return float(out) if out.ndim == 0 else out


def risk_elastic(lam, gamma, mu):
    """MSE of soft thresholding followed by 1/(1+gamma) shrinkage.

    gamma = +inf collapses to the zero estimator (w = 0) and returns mu^2.
    """
    lam = np.asarray(lam, dtype=float)
    mu = np.abs(np.asarray(mu, dtype=float))  # risk is even in mu
    gamma = np.asarray(gamma, dtype=float)
    w = 1.0 / (1.0 + gamma)
    # same evaluation order as risk_soft so the gamma = 0 reduction is exact
    out = (
        mu * mu
        - 2.0 * (w * mu) * _soft_moment1(lam, mu)
        + (w * w) * _soft_moment2(lam, mu)
    )
    return float(out) if out.ndim == 0 else out


def risk_zero(mu):
    mu = np.asarray(mu, dtype=float)
    out = mu * mu
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# log-domain forms: needed where the optimal soft threshold is so large that
# every density factor underflows, yet the location of the minimum of the
# worst-case risk still has to be resolved.


def _sign_log(v: float) -> Tuple[float, float]:
    if v == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, v), math.log(abs(v))


def _signed_logsumexp(terms) -> Tuple[float, float]:
    """Combine (sign, log|x|) terms into the (sign, log|sum|) of their sum."""
    finite = [(s, l) for s, l in terms if s != 0.0 and l > -math.inf]
    if not finite:
        return 0.0, -math.inf
    top = max(l for _, l in finite)
    acc = sum(s * math.exp(l - top) for s, l in finite)
    if acc == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, acc), top + math.log(abs(acc))


def soft_risk_zero_sign_log(lam: float) -> Tuple[float, float]:
    """(sign, log) of r_soft(lam, 0); stable for arbitrarily large lam."""
    if lam < _PLAIN_LIMIT:
        return _sign_log(risk_soft(lam, 0.0))
    h = tail_to_density_ratio(lam)
    g0 = 2.0 * ((1.0 + lam * lam) * h - lam)
    s, lg = _sign_log(g0)
    return s, lg + log_phi(lam)


def soft_excess_sign_log(lam: float, mu: float) -> Tuple[float, float]:
    """(sign, log) of r_soft(lam, mu) - mu^2; stable for arbitrarily large lam."""
    mu = abs(mu)
    a = lam - mu
    if a < _PLAIN_LIMIT:
        return _sign_log(float(_soft_moment2(lam, mu) - 2.0 * mu * _soft_moment1(lam, mu)))
    b = lam + mu
    ha = tail_to_density_ratio(a)
    hb = tail_to_density_ratio(b)
    g_minus = (1.0 + a * a + 2.0 * mu * a) * ha - a - 2.0 * mu
    g_plus = (1.0 + b * b - 2.0 * mu * b) * hb - b + 2.0 * mu
    sm, lm = _sign_log(g_minus)
    sp, lp = _sign_log(g_plus)
    return _signed_logsumexp([(sm, lm + log_phi(a)), (sp, lp + log_phi(b))])


def soft_sup_excess_key(lam: float, eps: float, mu: float):
    """Ordering key for (worst-case soft risk at lam) - eps*mu^2.

    Comparable tuple; smaller key means smaller worst-case risk.  Works far
    past the float64 underflow point of the risk dip itself.
    """
    s0, l0 = soft_risk_zero_sign_log(lam)
    s1, l1 = soft_excess_sign_log(lam, mu)
    s, l = _signed_logsumexp(
        [(s0, l0 + math.log1p(-eps)), (s1, l1 + math.log(eps))]
    )
    if s < 0:
        return (0.0, -l)
    if s == 0:
        return (1.0, -math.inf)
    return (1.0, l)


def soft_sup_excess(lam: float, eps: float, mu: float) -> float:
    """(worst-case soft risk at lam) - eps*mu^2 as a float (may underflow to 0)."""
    s0, l0 = soft_risk_zero_sign_log(lam)
    s1, l1 = soft_excess_sign_log(lam, mu)
    s, l = _signed_logsumexp(
        [(s0, l0 + math.log1p(-eps)), (s1, l1 + math.log(eps))]
    )
    if s == 0.0 or l < -745.0:
        return 0.0
    return s * math.exp(l)


# ---------------------------------------------------------------------------
# oracles


_MC_CHUNK = 1 << 20


def mc_risk(
    kind: EstimatorKind,
    tuning: Tuning,
    mu: float,
    samples: int,
    seed: int,
) -> RiskReport:
    """Monte-Carlo estimate of the one-dimensional risk, deterministic in seed.

    Processed in fixed-size chunks with reused buffers so large sample counts
    stay memory-bandwidth friendly; the chunk layout is a constant, so the
    result depends only on (kind, tuning, mu, samples, seed).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(int(seed) & _SEED_MASK)
    chunk = min(samples, _MC_CHUNK)
    buf = np.empty(chunk)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        take = min(chunk, samples - done)
        y = buf[:take]
        rng.standard_normal(out=y)
        y += mu
        sq = apply(kind, tuning, y)
        sq -= mu
        sq *= sq
        total += float(np.sum(sq))
        sq *= sq
        total_sq += float(np.sum(sq))
        done += take
    value = total / samples
    if samples > 1:
        var = max(total_sq / samples - value * value, 0.0) * samples / (samples - 1)
        se = math.sqrt(var / samples)
    else:
        se = 0.0
    return RiskReport(value=value, method="monte_carlo", error_bound=se)


def quad_risk(
    kind: EstimatorKind,
    tuning: Tuning,
    mu: float,
    tol: float = 1e-10,
) -> RiskReport:
    """Quadrature estimate of the one-dimensional risk.

    Splits the integration window at the thresholding kinks z = +-lam - mu so
    each piece is smooth.
    """
    if kind in (EstimatorKind.SOFT, EstimatorKind.HARD, EstimatorKind.SOFT_LINEAR):
        breaks = (tuning.lam - mu, -tuning.lam - mu)
    else:
        breaks = ()

    def integrand(z):
        est = apply(kind, tuning, mu + z)
        d = est - mu
        return d * d

    value = gauss_expect(integrand, center=0.0, halfwidth=8.0, tol=tol, breakpoints=breaks)
    return RiskReport(value=max(value, 0.0), method="quadrature", error_bound=tol)


# ---------------------------------------------------------------------------
# worst-case risk over the space


def hard_worst_signal(lam: float, mu_max: float, coarse: int = 1024,
                      refine_tol: float = 1e-10) -> Tuple[float, float]:
    """argmax/max of r_hard(lam, m) over m in [0, mu_max].

    Coarse grid scan followed by golden-section refinement of the bracketing
    interval; the refined value never drops below the grid maximum.
    """
    if mu_max <= 0:
        return 0.0, float(risk_hard(lam, 0.0))
    grid = np.linspace(0.0, mu_max, coarse)
    vals = risk_hard(np.full_like(grid, lam), grid)
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, coarse - 1)]
    x, neg_v, _ = golden_section_min(
        lambda m: -float(risk_hard(lam, m)),
        lo,
        hi,
        tol=refine_tol * max(1.0, mu_max),
    )
    if -neg_v >= vals[i]:
        return float(x), float(-neg_v)
    return float(grid[i]), float(vals[i])


def sup_risk(kind: EstimatorKind, tuning: Tuning, space: SparseSpace) -> RiskReport:
    """Worst-case n-dimensional MSE of the estimator over the space.

    Computed at unit noise and rescaled by sigma^2.  For the monotone-risk
    families the worst configuration puts all k nonzeros at tau (the l2
    boundary); hard thresholding needs an inner maximization because its
    one-dimensional risk peaks at an interior signal value.
    """
    eps, mu = space.eps, space.mu
    scale = space.n * space.sigma ** 2
    err = 0.0
    if kind is EstimatorKind.LINEAR:
        lam_t = tuning.lam
        val = (1.0 - eps) * risk_linear(lam_t, 0.0) + eps * risk_linear(lam_t, mu)
    elif kind is EstimatorKind.ZERO:
        val = eps * risk_zero(mu)
    else:
        lam_t = tuning.lam / space.sigma
        if kind is EstimatorKind.SOFT:
            val = (1.0 - eps) * risk_soft(lam_t, 0.0) + eps * risk_soft(lam_t, mu)
        elif kind is EstimatorKind.SOFT_LINEAR:
            val = (1.0 - eps) * risk_elastic(lam_t, tuning.gamma, 0.0) + eps * risk_elastic(
                lam_t, tuning.gamma, mu
            )
        elif kind is EstimatorKind.HARD:
            _, peak = hard_worst_signal(lam_t, mu)
            val = (1.0 - eps) * risk_hard(lam_t, 0.0) + eps * peak
            err = scale * eps * 1e-9 * max(1.0, peak)
        else:  # pragma: no cover
            raise ValueError(f"unknown estimator kind {kind!r}")
    return RiskReport(value=scale * float(val), method="closed_form", error_bound=err)
