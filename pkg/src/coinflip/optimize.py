"""Scalar maximization helpers."""

from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, width: float = 1e-12):
    """Maximize a unimodal ``f`` on ``[lo, hi]`` until the bracket is
    narrower than ``width``. Returns ``(x, f(x))`` at the bracket midpoint
    or the best interior probe, whichever is larger."""
    a, b = min(lo, hi), max(lo, hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        # once the interval is at machine resolution the probes stop moving
        if c <= a or d >= b:
            break
    mid = 0.5 * (a + b)
    fm = f(mid)
    best = max((fm, mid), (fc, c), (fd, d))
    return best[1], best[0]


def grid_then_golden(f, lo: float, hi: float, points: int = 65, width: float = 1e-12):
    """Coarse scan followed by golden refinement around the best grid cell.

    Copes with objectives that are only unimodal locally."""
    xs = np.linspace(lo, hi, points)
    ys = [f(x) for x in xs]
    i = int(np.argmax(ys))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, points - 1)]
    x, fx = golden_section_max(f, a, b, width)
    if ys[i] > fx:
        return float(xs[i]), float(ys[i])
    return x, fx
