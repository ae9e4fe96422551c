"""Scalar golden-section search used by the tuning optimizers."""

from __future__ import annotations

import math
from typing import Callable, Tuple

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_min(
    f: Callable[[float], object],
    a: float,
    b: float,
    tol: float,
    max_iter: int = 400,
) -> Tuple[float, object, int]:
    """Minimize f on [a, b] assuming unimodality; stop at interval width tol.

    f may return any totally ordered value (floats, or tuples for
    lexicographic objectives).  Returns (x_best, f_best, evaluations).
    """
    a, b = (a, b) if a <= b else (b, a)
    evals = 0
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x), 1
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if h <= tol:
            break
        h *= INV_PHI
        if yc < yd:
            b, d, yd = d, c, yc
            c = a + INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            d = a + INV_PHI * h
            yd = f(d)
        evals += 1
    if yc < yd:
        return c, yc, evals
    return d, yd, evals
