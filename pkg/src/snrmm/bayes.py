"""Spike and block priors, exact posterior means, and Bayes-risk machinery.

The block prior splits the coordinates into independent blocks, each holding
a single spike at a uniformly random location; its Bayes risk factorizes into
the number of blocks times the single-block risk, which is what the Monte
Carlo estimator targets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .minimax import Regime
from .risk import SparseSpace

_SEED_MASK = (1 << 64) - 1
_CHUNK_ELEMENTS = 4_000_000


class Sided(enum.Enum):
    SYMMETRIC = "symmetric"
    ONE_SIDED = "one-sided"


@dataclass(frozen=True)
class SpikePrior:
    """Single-spike prior on an m-dimensional block, unit noise scale.

    Symmetric: mass 1/(2m) on each of +-mu * e_i.
    One-sided: mass 1/m on each of +mu * e_i.
    """

    mu: float
    m: int
    sided: Sided = Sided.SYMMETRIC

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if self.m < 1:
            raise ValueError("m must be a positive integer")


@dataclass(frozen=True)
class BlockPrior:
    spike: SpikePrior
    blocks: int

    def __post_init__(self):
        if self.blocks < 1:
            raise ValueError("blocks must be a positive integer")

    @property
    def dimension(self) -> int:
        return self.blocks * self.spike.m


@dataclass(frozen=True)
class BayesRiskEstimate:
    value: float
    standard_error: float
    reps: int
    seed: int


def _posterior_mean_symmetric_rows(y: np.ndarray, mu: float) -> np.ndarray:
    a = mu * y
    top = np.max(np.abs(a), axis=1, keepdims=True)
    ep = np.exp(a - top)
    em = np.exp(-a - top)
    denom = np.sum(ep + em, axis=1, keepdims=True)
    return mu * (ep - em) / denom


def _posterior_mean_onesided_rows(y: np.ndarray, mu: float) -> np.ndarray:
    a = mu * y
    top = np.max(a, axis=1, keepdims=True)
    ep = np.exp(a - top)
    return mu * ep / np.sum(ep, axis=1, keepdims=True)


def posterior_mean_symmetric(y, mu: float) -> np.ndarray:
    """Posterior mean of the symmetric spike prior given one block observation.

    Coordinate j gets mu*(e^{mu y_j} - e^{-mu y_j}) / sum_i (e^{mu y_i} + e^{-mu y_i}),
    evaluated with max-subtraction so arbitrarily large mu*y cannot overflow.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    y = np.atleast_2d(np.asarray(y, dtype=float))
    return _posterior_mean_symmetric_rows(y, mu)[0]


def posterior_mean_onesided(y, mu: float) -> np.ndarray:
    """Posterior mean of the one-sided spike prior: mu times a softmax of mu*y."""
    if not mu > 0:
        raise ValueError("mu must be positive")
    y = np.atleast_2d(np.asarray(y, dtype=float))
    return _posterior_mean_onesided_rows(y, mu)[0]


def mc_bayes_risk(prior: BlockPrior, reps: int, seed: int) -> BayesRiskEstimate:
    """Monte-Carlo Bayes risk of the block prior, deterministic given seed.

    Draws (theta, y = theta + z) from a single block, scores the exact
    posterior mean, and multiplies the per-block risk by the block count.
    Work is chunked; each chunk owns an RNG stream derived from
    (seed, chunk index), so the estimate does not depend on how chunks
    would be distributed across workers.
    """
    if reps < 2:
        raise ValueError("reps must be at least 2")
    spike = prior.spike
    m, mu = spike.m, spike.mu
    chunk = max(1, min(reps, _CHUNK_ELEMENTS // max(m, 1)))
    losses = np.empty(reps)
    done = 0
    index = 0
    masked = int(seed) & _SEED_MASK
    while done < reps:
        take = min(chunk, reps - done)
        rng = np.random.default_rng(np.random.SeedSequence([masked, index]))
        locs = rng.integers(0, m, size=take)
        if spike.sided is Sided.SYMMETRIC:
            signs = np.where(rng.random(take) < 0.5, 1.0, -1.0)
        else:
            signs = np.ones(take)
        z = rng.standard_normal((take, m))
        theta = np.zeros((take, m))
        theta[np.arange(take), locs] = signs * mu
        y = theta + z
        if spike.sided is Sided.SYMMETRIC:
            est = _posterior_mean_symmetric_rows(y, mu)
        else:
            est = _posterior_mean_onesided_rows(y, mu)
        d = est - theta
        losses[done : done + take] = np.sum(d * d, axis=1)
        done += take
        index += 1
    value = prior.blocks * float(np.mean(losses))
    se = prior.blocks * float(np.std(losses, ddof=1) / math.sqrt(reps))
    return BayesRiskEstimate(
        value=value, standard_error=se, reps=reps, seed=int(seed)
    )


def onesided_spike_location(m: int) -> float:
    """Spike location used for the high-SNR lower-bound check:
    nu_{m-1} - sqrt(2 log nu_{m-1}) with nu_j = sqrt(2 log j)."""
    if m < 3:
        raise ValueError("m must be at least 3")
    nu = math.sqrt(2.0 * math.log(m - 1))
    if nu <= 1.0:
        raise ValueError("block too small for the high-SNR spike location")
    return nu - math.sqrt(2.0 * math.log(nu))


def lower_bound_formula(regime: Regime, space: SparseSpace) -> float:
    """Closed-form Bayes lower bound on the minimax risk (o(1) dropped).

    Absolute units (n sigma^2 scale), with block size m = n/k.
    """
    eps, mu = space.eps, space.mu
    scale = space.n * space.sigma ** 2
    m = space.n / space.k
    if m < 3:
        raise ValueError("block size n/k must be at least 3")
    if regime is Regime.LOW:
        return scale * (eps * mu * mu - eps * eps * mu ** 4)
    if regime is Regime.MODERATE:
        return scale * (eps * mu * mu - 0.5 * eps * eps * mu * mu * math.exp(mu * mu))
    if regime is Regime.HIGH:
        log_m = math.log(m)
        nu = math.sqrt(2.0 * log_m)
        if nu <= 1.0:
            raise ValueError("block size too small for the high-SNR bound")
        return scale * (2.0 * eps * log_m - 2.0 * eps * nu * math.sqrt(2.0 * math.log(nu)))
    raise ValueError(f"no lower-bound formula for regime {regime!r}")
