"""Coordinate-wise estimators for the sparse normal-means problem."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class EstimatorKind(enum.Enum):
    SOFT = "soft"
    HARD = "hard"
    LINEAR = "linear"
    SOFT_LINEAR = "soft-linear"
    ZERO = "zero"


@dataclass(frozen=True)
class Tuning:
    """Estimator tuning pair.

    lam: threshold / shrinkage level, in observation units (dimensionless
         for the linear estimator).
    gamma: quadratic shrinkage weight, dimensionless; only the soft-linear
         estimator reads it.  gamma = +inf collapses to the zero estimator.
    """

    lam: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if math.isnan(self.lam) or self.lam < 0 or math.isinf(self.lam):
            raise ValueError(f"lam must be finite and >= 0, got {self.lam}")
        if math.isnan(self.gamma) or self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


def soft_threshold(y, lam):
    y = np.asarray(y, dtype=float)
    return np.sign(y) * np.maximum(np.abs(y) - lam, 0.0)


def hard_threshold(y, lam):
    # ties |y| == lam map to 0 (keep-or-kill uses a strict inequality)
    y = np.asarray(y, dtype=float)
    return np.where(np.abs(y) > lam, y, 0.0)


def apply(kind: EstimatorKind, tuning: Tuning, y) -> np.ndarray:
    """Apply the estimator coordinate-wise to an observation vector."""
    y = np.asarray(y, dtype=float)
    if kind is EstimatorKind.SOFT:
        out = soft_threshold(y, tuning.lam)
    elif kind is EstimatorKind.HARD:
        out = hard_threshold(y, tuning.lam)
    elif kind is EstimatorKind.LINEAR:
        out = y / (1.0 + tuning.lam)
    elif kind is EstimatorKind.SOFT_LINEAR:
        if math.isinf(tuning.gamma):
            out = np.zeros_like(y)
        else:
            out = soft_threshold(y, tuning.lam) / (1.0 + tuning.gamma)
    elif kind is EstimatorKind.ZERO:
        out = np.zeros_like(y)
    else:  # pragma: no cover
        raise ValueError(f"unknown estimator kind {kind!r}")
    return out


def scale_tuning(kind: EstimatorKind, tuning: Tuning, t: float) -> Tuning:
    """Tuning that makes the estimator equivariant under y -> t*y.

    For every kind: t * apply(kind, tuning, y) == apply(kind, scale_tuning(...), t*y).
    Thresholds scale with the data; the linear weight and gamma do not.
    """
    if not t > 0:
        raise ValueError(f"scale factor must be positive, got {t}")
    if kind in (EstimatorKind.SOFT, EstimatorKind.HARD, EstimatorKind.SOFT_LINEAR):
        return Tuning(lam=t * tuning.lam, gamma=tuning.gamma)
    return tuning
