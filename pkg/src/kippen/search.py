"""Golden-section line search."""
from __future__ import annotations

import math

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_min(f, lo: float, hi: float, xtol: float = 1e-10,
               max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``.

    The endpoints are evaluated as well, so a monotone ``f`` returns the
    better endpoint rather than an interior point.
    """
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    best = min(((f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)))
    return best[1], best[0]


def golden_max(f, lo: float, hi: float, xtol: float = 1e-10,
               max_iter: int = 200) -> tuple[float, float]:
    x, fx = golden_min(lambda u: -f(u), lo, hi, xtol, max_iter)
    return x, -fx
