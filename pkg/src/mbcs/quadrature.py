"""Adaptive composite Simpson integration for smooth or piecewise-smooth
integrands (real or complex valued)."""

import numpy as np


def _simpson_recurse(f, a, fa, b, fb, c, fc, whole, tol, depth):
    left_mid = 0.5 * (a + c)
    right_mid = 0.5 * (c + b)
    f_lm = f(left_mid)
    f_rm = f(right_mid)
    h = c - a
    left = (h / 6.0) * (fa + 4.0 * f_lm + fc)
    right = (h / 6.0) * (fc + 4.0 * f_rm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    half = 0.5 * tol
    return _simpson_recurse(
        f, a, fa, c, fc, left_mid, f_lm, left, half, depth - 1
    ) + _simpson_recurse(f, c, fc, b, fb, right_mid, f_rm, right, half, depth - 1)


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-9, max_depth: int = 48):
    """Integrate f over [a, b] to the requested absolute tolerance."""
    if b <= a:
        return 0.0
    fa, fb = f(a), f(b)
    c = 0.5 * (a + b)
    fc = f(c)
    whole = ((b - a) / 6.0) * (fa + 4.0 * fc + fb)
    return _simpson_recurse(f, a, fa, b, fb, c, fc, whole, tol, max_depth)


def integrate_piecewise(f, breakpoints, tol: float = 1e-9):
    """Integrate f across consecutive breakpoint intervals, splitting the
    tolerance budget evenly. Breakpoints should bracket any kinks or jumps."""
    pts = sorted(float(p) for p in breakpoints)
    pieces = [(a, b) for a, b in zip(pts[:-1], pts[1:]) if b > a]
    if not pieces:
        return 0.0
    per_piece = tol / len(pieces)
    total = 0.0
    for a, b in pieces:
        total = total + adaptive_simpson(f, a, b, per_piece)
    return total


def grid_trapezoid(values: np.ndarray, spacing: float):
    """Trapezoid rule on uniformly spaced samples."""
    v = np.asarray(values)
    if v.shape[0] < 2:
        return 0.0
    return (v[0] / 2 + v[1:-1].sum(axis=0) + v[-1] / 2) * spacing
