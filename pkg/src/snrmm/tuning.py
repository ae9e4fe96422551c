"""Minimize worst-case risk over tuning parameters; closed-form recommendations."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .estimators import EstimatorKind, Tuning
from .risk import (
    SparseSpace,
    hard_worst_signal,
    risk_elastic,
    risk_hard,
    risk_linear,
    soft_sup_excess,
    soft_sup_excess_key,
)
from .search import golden_section_min

GAMMA_CAP = 1e12


@dataclass(frozen=True)
class TuningResult:
    tuning: Tuning
    value: float  # minimized worst-case risk, absolute units (n sigma^2 scale)
    evaluations: int
    boundary: Optional[str] = None  # None | "lower" | "upper"
    gamma_clamped: bool = False


def _lambda_range(kind: EstimatorKind, space: SparseSpace) -> float:
    """Upper end of the (unit-noise) tuning search range.

    Must bracket the optimum in every regime: thresholding optima scale like
    mu + nu in high SNR but like log(2/eps)/mu when the signal is weak; the
    linear optimum is 1/(eps*mu^2).
    """
    eps, mu, nu = space.eps, space.mu, space.nu
    if kind is EstimatorKind.LINEAR:
        return max(10.0, 10.0 / (eps * mu * mu))
    top = max(10.0, 2.0 * (mu + nu))
    if kind in (EstimatorKind.SOFT, EstimatorKind.SOFT_LINEAR):
        top = max(top, 2.0 * (math.log(2.0 / eps) + 0.5 * mu * mu) / mu)
    return top


def _coarse_grid(top: float, points: int) -> np.ndarray:
    grid = np.geomspace(1e-4, top, points)
    return np.concatenate(([0.0], grid))


def _hard_objective(lam_t: float, eps: float, mu: float) -> float:
    _, peak = hard_worst_signal(lam_t, mu)
    return (1.0 - eps) * risk_hard(lam_t, 0.0) + eps * peak


def _linear_objective(lam: float, eps: float, mu: float) -> float:
    return (1.0 - eps) * risk_linear(lam, 0.0) + eps * risk_linear(lam, mu)


def _elastic_objective(lam_t: float, gamma: float, eps: float, mu: float) -> float:
    return (1.0 - eps) * risk_elastic(lam_t, gamma, 0.0) + eps * risk_elastic(
        lam_t, gamma, mu
    )


def optimize_lambda(
    kind: EstimatorKind,
    space: SparseSpace,
    grid_points: int = 512,
    refine_tol: float = 1e-8,
) -> TuningResult:
    """Minimize the worst-case risk over the scalar tuning of soft/hard/linear.

    Log-spaced coarse grid on [0, top] followed by golden-section refinement
    of the bracketing interval.  Grid ties break toward the smaller tuning.
    The returned lam is in observation units for the thresholding estimators
    and dimensionless for the linear one.  A boundary solution (optimum at 0
    or at the top of the range) is flagged so callers can widen the range.
    """
    if kind not in (EstimatorKind.SOFT, EstimatorKind.HARD, EstimatorKind.LINEAR):
        raise ValueError(f"optimize_lambda supports soft/hard/linear, got {kind!r}")
    if grid_points < 8:
        raise ValueError("grid_points must be at least 8")
    eps, mu = space.eps, space.mu
    top = _lambda_range(kind, space)
    grid = _coarse_grid(top, grid_points)

    if kind is EstimatorKind.SOFT:
        objective = lambda lt: soft_sup_excess_key(lt, eps, mu)
    elif kind is EstimatorKind.HARD:
        objective = lambda lt: _hard_objective(lt, eps, mu)
    else:
        objective = lambda lt: _linear_objective(lt, eps, mu)

    keys = [objective(lt) for lt in grid]
    evals = len(grid)
    best = min(range(len(grid)), key=lambda i: (keys[i], grid[i]))

    boundary = None
    if best == 0:
        boundary = "lower"
        lam_t, best_key = grid[0], keys[0]
    elif best == len(grid) - 1:
        boundary = "upper"
        lam_t, best_key = grid[best], keys[best]
    else:
        lo, hi = grid[best - 1], grid[best + 1]
        tol = refine_tol * max(1.0, grid[best])
        lam_t, key, gs_evals = golden_section_min(objective, lo, hi, tol)
        evals += gs_evals
        if keys[best] < key:
            lam_t, key = grid[best], keys[best]
        best_key = key

    scale = space.n * space.sigma ** 2
    if kind is EstimatorKind.SOFT:
        value = scale * (eps * mu * mu + soft_sup_excess(lam_t, eps, mu))
        lam = space.sigma * lam_t
    elif kind is EstimatorKind.HARD:
        value = scale * float(best_key)
        lam = space.sigma * lam_t
    else:
        value = scale * float(best_key)
        lam = lam_t
    return TuningResult(
        tuning=Tuning(lam=lam), value=value, evaluations=evals, boundary=boundary
    )


def _line_refine(objective, x0: float, lo_cap: float, hi_cap: float,
                 refine_tol: float, allow_zero: bool) -> Tuple[float, float, int]:
    """1-D pass: local log-grid around x0, then golden-section on the bracket."""
    lo = max(lo_cap, (x0 if x0 > 0 else lo_cap) / 64.0)
    hi = min(hi_cap, max(x0 * 64.0, lo * 1e4))
    pts = list(np.geomspace(lo, hi, 33))
    if allow_zero:
        pts = [0.0] + pts
    vals = [objective(x) for x in pts]
    evals = len(pts)
    i = min(range(len(pts)), key=lambda j: (vals[j], pts[j]))
    if i == 0 or i == len(pts) - 1:
        return pts[i], vals[i], evals
    x, v, gs = golden_section_min(
        objective, pts[i - 1], pts[i + 1], refine_tol * max(1.0, pts[i])
    )
    evals += gs
    if vals[i] < v:
        return pts[i], vals[i], evals
    return x, v, evals


def optimize_lambda_gamma(space: SparseSpace, refine_tol: float = 1e-8) -> TuningResult:
    """Minimize the worst-case soft-linear risk over (lam, gamma) jointly.

    Coarse product grid seeded with the closed-form recommendations (the
    moderate-SNR pair, the optimal pure-soft threshold with gamma = 0, and a
    near-zero threshold with the linear-optimal shrink), then coordinate
    descent alternating golden-section passes until the value stalls.
    gamma is clamped to [0, 1e12]; the clamp is reported.
    """
    eps, mu = space.eps, space.mu
    top = _lambda_range(EstimatorKind.SOFT, space)
    scale = space.n * space.sigma ** 2

    objective = lambda lt, g: _elastic_objective(lt, g, eps, mu)

    lam_grid = np.geomspace(1e-4, top, 60)
    gamma_grid = np.concatenate(([0.0], np.geomspace(1e-6, GAMMA_CAP, 59)))
    vals = _elastic_objective(
        lam_grid[:, None], gamma_grid[None, :], eps, mu
    )
    evals = vals.size
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    candidates = [(float(lam_grid[i]), float(gamma_grid[j]))]

    # closed-form seeds
    log_denom = math.log(2.0 * eps * mu * mu) + 1.5 * mu * mu
    gamma_rec = math.exp(-log_denom) - 1.0
    candidates.append((2.0 * mu, max(gamma_rec, 0.0)))
    soft_opt = optimize_lambda(EstimatorKind.SOFT, space, refine_tol=refine_tol)
    evals += soft_opt.evaluations
    candidates.append((soft_opt.tuning.lam / space.sigma, 0.0))
    candidates.append((1e-8, 1.0 / (eps * mu * mu)))

    clamped = False
    best_pair, best_val = None, math.inf
    for lt, g in candidates:
        if g > GAMMA_CAP:
            g, clamped = GAMMA_CAP, True
        v = objective(lt, g)
        evals += 1
        if v < best_val:
            best_pair, best_val = (lt, g), v

    lam_t, gamma = best_pair
    for _ in range(100):
        previous = best_val
        lam_t, best_val, e1 = _line_refine(
            lambda x: objective(x, gamma), lam_t, 1e-8, top, refine_tol, allow_zero=True
        )
        gamma, best_val, e2 = _line_refine(
            lambda x: objective(lam_t, x), gamma, 0.0, GAMMA_CAP, refine_tol,
            allow_zero=True,
        )
        evals += e1 + e2
        if previous - best_val < refine_tol * max(1.0, abs(previous)):
            break

    if gamma >= GAMMA_CAP:
        clamped = True
    boundary = None
    if lam_t >= top * (1.0 - 1e-9):
        boundary = "upper"
    elif lam_t <= 1e-8:
        boundary = "lower"
    return TuningResult(
        tuning=Tuning(lam=space.sigma * lam_t, gamma=gamma),
        value=scale * best_val,
        evaluations=evals,
        boundary=boundary,
        gamma_clamped=clamped,
    )


def recommended_tuning(kind: EstimatorKind, space: SparseSpace, regime) -> Tuning:
    """Closed-form tuning recommendation for the (estimator, regime) pair.

    Soft and hard thresholding get the universal threshold sigma*sqrt(2 log(1/eps))
    in every regime; the linear estimator is covered in low SNR and the
    soft-linear estimator in moderate SNR.  Other pairs raise ValueError.
    """
    from .minimax import Regime  # local import to avoid a cycle

    eps, mu = space.eps, space.mu
    if kind in (EstimatorKind.SOFT, EstimatorKind.HARD):
        return Tuning(lam=space.sigma * space.nu)
    if kind is EstimatorKind.LINEAR:
        if regime is Regime.LOW:
            return Tuning(lam=1.0 / (eps * mu * mu))
        raise ValueError(
            f"no linear-estimator recommendation for regime {regime!r}; only low SNR"
        )
    if kind is EstimatorKind.SOFT_LINEAR:
        if regime is Regime.MODERATE:
            log_denom = math.log(2.0 * eps * mu * mu) + 1.5 * mu * mu
            gamma = math.exp(-log_denom) - 1.0
            if gamma < 0.0:
                warnings.warn(
                    "recommended gamma is negative at this (eps, mu); clamped to 0",
                    stacklevel=2,
                )
                gamma = 0.0
            return Tuning(lam=2.0 * space.sigma * mu, gamma=gamma)
        raise ValueError(
            f"no soft-linear recommendation for regime {regime!r}; only moderate SNR"
        )
    raise ValueError(f"no recommendation for estimator {kind!r}")


def hard_tuning_window(space: SparseSpace, c1: float, c2: float) -> Tuple[float, float]:
    """Window of lam^2/sigma^2 values that keep hard thresholding second-order
    optimal in the high-SNR regime: [nu^2 - c1*log(log(nu)), nu^2 + c2*nu*sqrt(2 log nu)].
    """
    if not 0.0 <= c1 < 1.0:
        raise ValueError("c1 must lie in [0, 1)")
    if not c2 > 0:
        raise ValueError("c2 must be positive")
    nu = space.nu
    if nu <= math.e:
        raise ValueError(
            f"window undefined: sqrt(2 log(1/eps)) = {nu:.4f} must exceed e"
        )
    lo = nu * nu - c1 * math.log(math.log(nu))
    hi = nu * nu + c2 * nu * math.sqrt(2.0 * math.log(nu))
    return lo, hi
