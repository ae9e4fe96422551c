"""Standard-normal density/tail primitives and a deterministic quadrature engine.

The quadrature engine integrates f(z)*phi(z) over a truncated window and is
used throughout the test suite as an independent oracle for closed-form
Gaussian expectations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special

SQRT_2PI = math.sqrt(2.0 * math.pi)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

_SQRT2 = math.sqrt(2.0)


def phi(x):
    """Standard normal density (2*pi)^(-1/2) exp(-x^2/2).

    Accepts scalars or numpy arrays; returns the same shape.
    """
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / SQRT_2PI
    return float(out) if out.ndim == 0 else out


def log_phi(x: float) -> float:
    """log of the standard normal density, exact for any finite x."""
    return -0.5 * x * x - LOG_SQRT_2PI


def upper_tail(x):
    """Upper tail probability 1 - Phi(x), via the complementary error function.

    Never computed as 1 minus a CDF value, so there is no cancellation for
    large x; underflows gracefully to 0 far in the right tail.
    """
    x = np.asarray(x, dtype=float)
    out = 0.5 * special.erfc(x / _SQRT2)
    return float(out) if out.ndim == 0 else out


def tail_to_density_ratio(x):
    """(1 - Phi(x)) / phi(x) for x >= 0, without underflow (scaled erfc)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("tail_to_density_ratio requires x >= 0")
    out = math.sqrt(math.pi / 2.0) * special.erfcx(x / _SQRT2)
    return float(out) if out.ndim == 0 else out


def mills_bound(order: int, lam: float) -> float:
    """Truncated Mills-ratio series bound for the Gaussian upper tail.

    Returns lam^(-1) phi(lam) * sum_{k=0}^{order} (-1)^k (2k-1)!! / lam^(2k).
    Even orders upper-bound 1 - Phi(lam), odd orders lower-bound it.
    """
    if order < 0 or order != int(order):
        raise ValueError("order must be a non-negative integer")
    if not lam > 0:
        raise ValueError(f"mills_bound requires lam > 0, got {lam}")
    inv_sq = 1.0 / (lam * lam)
    term = 1.0
    total = 1.0
    for k in range(1, int(order) + 1):
        term *= (2 * k - 1) * inv_sq
        total += term if k % 2 == 0 else -term
    return phi(lam) / lam * total


@dataclass(frozen=True)
class TailSeries:
    """A fixed-order truncated tail series, evaluable at any positive point."""

    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")

    def value_at(self, lam: float) -> float:
        return mills_bound(self.order, lam)


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature exhausts its node budget.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


# 16-point Gauss-Legendre panel rule; refinement doubles the panel count.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gl_composite(f: Callable, a: float, b: float, panels: int) -> float:
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    g = fx * phi(x)
    return float(np.sum(g * _GL_WEIGHTS[None, :] * half[:, None]))


def gauss_expect(
    f: Callable,
    center: float = 0.0,
    halfwidth: float = 8.0,
    tol: float = 1e-10,
    breakpoints: Sequence[float] = (),
    max_nodes: int = 2_000_000,
) -> float:
    """Integrate f(z) * phi(z) over [center - halfwidth, center + halfwidth].

    Piecewise adaptive: the window is split at the supplied breakpoints
    (integrand kinks), and each smooth piece is integrated by a composite
    Gauss-Legendre rule whose panel count doubles until two successive
    estimates agree within the piece's share of `tol`.  Deterministic for
    fixed inputs.  `f` must accept numpy arrays (scalar-returning constants
    are broadcast).

    Raises QuadratureError, carrying the best estimate and its error bound,
    if the node budget is exhausted before convergence.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if halfwidth < 8:
        raise ValueError("halfwidth must be at least 8")
    lo, hi = center - halfwidth, center + halfwidth
    cuts = sorted({float(p) for p in breakpoints if lo < p < hi})
    edges = [lo, *cuts, hi]
    piece_tol = tol / (len(edges) - 1)

    total = 0.0
    total_err = 0.0
    nodes = 0
    converged = True
    for a, b in zip(edges[:-1], edges[1:]):
        panels = 2
        prev = _gl_composite(f, a, b, panels)
        nodes += panels * 16
        err = math.inf
        while True:
            panels *= 2
            cur = _gl_composite(f, a, b, panels)
            nodes += panels * 16
            err = abs(cur - prev)
            if err <= piece_tol:
                break
            if nodes > max_nodes:
                converged = False
                break
            prev = cur
        total += cur
        total_err += err
        if not converged:
            break
    if not converged:
        raise QuadratureError(
            f"quadrature did not converge within {max_nodes} nodes "
            f"(best estimate {total!r}, error bound {total_err!r})",
            estimate=total,
            error_bound=total_err,
        )
    return total
