"""SNR-regime classification and closed-form risk approximations.

Every approximation here drops vanishing correction terms and is labeled as
such in the returned report; none carries a finite-sample remainder.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .estimators import EstimatorKind
from .risk import SparseSpace

ASYMPTOTIC_NOTE = "asymptotic, o(1) dropped"


class Regime(enum.Enum):
    LOW = "low"
    MODERATE = "moderate"
    HIGH = "high"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class RegimeDecision:
    """Classification outcome with the diagnostics that produced it."""

    regime: Regime
    mu: float
    ratio: float  # mu / sqrt(log(1/eps))
    low_cut: float
    high_cut: float


@dataclass(frozen=True)
class MinimaxApprox:
    regime: Regime
    first_order: float
    second_order: Optional[float]
    lower_bound: Optional[float]
    upper_bound: Optional[float]
    nu: float
    bounded_space: bool
    note: str = ASYMPTOTIC_NOTE

    def __post_init__(self):
        if self.second_order is not None and self.second_order > self.first_order:
            raise ValueError("second-order value cannot exceed the first order")

    @property
    def bounds_ordered(self) -> bool:
        """Whether lower_bound <= upper_bound.

        The moderate-regime displays only order correctly once mu exceeds
        2*sqrt(2/pi); with the vanishing terms dropped they can cross below
        that, which this flag surfaces instead of hiding.
        """
        if self.lower_bound is None or self.upper_bound is None:
            return True
        return self.lower_bound <= self.upper_bound


def classify_regime(
    space: SparseSpace, low_cut: float = 0.5, high_cut: float = 2.0
) -> RegimeDecision:
    """Finite-sample SNR-regime heuristic.

    low:      mu <= low_cut
    high:     mu >= high_cut * sqrt(log(1/eps))
    moderate: low_cut < mu <= sqrt(log(1/eps)) / high_cut
    The band between moderate and high stays unclassified so callers must
    state their intent explicitly.
    """
    eps, mu = space.eps, space.mu
    if eps >= 1:
        raise ValueError("classification requires eps = k/n < 1")
    root_log = math.sqrt(math.log(1.0 / eps))
    ratio = mu / root_log
    if mu <= low_cut:
        regime = Regime.LOW
    elif mu >= high_cut * root_log:
        regime = Regime.HIGH
    elif mu <= root_log / high_cut:
        regime = Regime.MODERATE
    else:
        regime = Regime.UNCLASSIFIED
    return RegimeDecision(
        regime=regime, mu=mu, ratio=ratio, low_cut=low_cut, high_cut=high_cut
    )


def _nu_terms(eps: float):
    log_inv = math.log(1.0 / eps)
    nu = math.sqrt(2.0 * log_inv)
    if nu <= 1.0:
        raise ValueError(
            f"high-SNR formulas need sqrt(2 log(1/eps)) > 1; got nu = {nu:.4f}"
        )
    return log_inv, nu


def minimax_approx(space: SparseSpace, regime: Regime) -> MinimaxApprox:
    """First/second-order approximation of the minimax risk in the given regime.

    In the moderate regime the unbounded space only admits a bracket, so
    second_order is reported only when the space carries a sup-norm bound
    (where it equals the lower bound).
    """
    eps, mu = space.eps, space.mu
    scale = space.n * space.sigma ** 2
    bounded = space.a_bound is not None
    if regime is Regime.LOW:
        first = scale * eps * mu * mu
        second = scale * (eps * mu * mu - eps * eps * mu ** 4)
        return MinimaxApprox(
            regime=regime,
            first_order=first,
            second_order=second,
            lower_bound=second,
            upper_bound=second,
            nu=space.nu,
            bounded_space=bounded,
        )
    if regime is Regime.MODERATE:
        first = scale * eps * mu * mu
        lower = scale * (eps * mu * mu - 0.5 * eps * eps * mu * mu * math.exp(mu * mu))
        upper = scale * (
            eps * mu * mu - math.sqrt(2.0 / math.pi) * eps * eps * mu * math.exp(mu * mu)
        )
        return MinimaxApprox(
            regime=regime,
            first_order=first,
            second_order=lower if bounded else None,
            lower_bound=lower,
            upper_bound=upper,
            nu=space.nu,
            bounded_space=bounded,
        )
    if regime is Regime.HIGH:
        log_inv, nu = _nu_terms(eps)
        first = scale * 2.0 * eps * log_inv
        second = scale * (
            2.0 * eps * log_inv - 2.0 * eps * nu * math.sqrt(2.0 * math.log(nu))
        )
        return MinimaxApprox(
            regime=regime,
            first_order=first,
            second_order=second,
            lower_bound=second,
            upper_bound=second,
            nu=nu,
            bounded_space=bounded,
        )
    raise ValueError(
        "regime is unclassified: classify the space or force a regime explicitly"
    )


def estimator_sup_risk_approx(
    kind: EstimatorKind, space: SparseSpace, regime: Regime
) -> float:
    """Closed-form approximation of the optimally tuned worst-case risk."""
    eps, mu = space.eps, space.mu
    scale = space.n * space.sigma ** 2
    if kind is EstimatorKind.LINEAR:
        if regime in (Regime.LOW, Regime.MODERATE, Regime.HIGH):
            return scale * eps * mu * mu / (1.0 + eps * mu * mu)
    elif kind is EstimatorKind.SOFT:
        if regime in (Regime.LOW, Regime.MODERATE):
            log_inv = math.log(1.0 / eps)
            return scale * (
                eps * mu * mu - math.exp(-0.5 * log_inv * log_inv / (mu * mu))
            )
        if regime is Regime.HIGH:
            log_inv, nu = _nu_terms(eps)
            return scale * (2.0 * eps * log_inv - 6.0 * eps * math.log(nu))
    elif kind is EstimatorKind.HARD:
        if regime in (Regime.LOW, Regime.MODERATE):
            return scale * eps * mu * mu
        if regime is Regime.HIGH:
            log_inv, nu = _nu_terms(eps)
            return scale * (
                2.0 * eps * log_inv - 2.0 * eps * nu * math.sqrt(2.0 * math.log(nu))
            )
    elif kind is EstimatorKind.SOFT_LINEAR:
        if regime is Regime.MODERATE:
            return scale * (
                eps * mu * mu
                - math.sqrt(2.0 / math.pi) * eps * eps * mu * math.exp(mu * mu)
            )
    raise ValueError(f"no sup-risk approximation for ({kind!r}, {regime!r})")


def classical_minimax(space: SparseSpace) -> float:
    """Leading-order minimax risk under the sparsity constraint alone."""
    if space.k >= space.n:
        raise ValueError("requires k < n")
    return 2.0 * space.sigma ** 2 * space.k * math.log(space.n / space.k)
