"""Bisection for monotone scalar maps, scalar and vectorized."""

import numpy as np

from .errors import ConvergenceError

MAX_ITER = 200


def expand_bracket(g, x0=1.0, max_iter=MAX_ITER):
    """Find ``lo < hi`` with ``g(lo) < 0 <= g(hi)`` for increasing ``g``.

    Starts from ``x0`` and doubles / halves.
    """
    lo = hi = float(x0)
    it = 0
    if g(hi) < 0:
        while g(hi) < 0:
            lo, hi = hi, 2.0 * hi
            it += 1
            if it > max_iter or not np.isfinite(hi):
                raise ConvergenceError("bracket expansion failed (upward)")
    else:
        while g(lo) >= 0:
            hi, lo = lo, 0.5 * lo
            it += 1
            if it > max_iter or lo == 0.0:
                raise ConvergenceError("bracket expansion failed (downward)")
    return lo, hi


def bisect_increasing(g, lo, hi, rtol=1e-12, max_iter=MAX_ITER):
    """Root of increasing ``g`` inside ``[lo, hi]`` (``g(lo) < 0 <= g(hi)``).

    Returns ``(root, lo, hi, iterations)``.
    """
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid, lo, hi, it
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi), lo, hi, it
    raise ConvergenceError(f"bisection did not converge in {max_iter} iterations")


def solve_increasing(g, x0=1.0, rtol=1e-12):
    """Root of an increasing map: bracket by doubling from ``x0``, then bisect."""
    lo, hi = expand_bracket(g, x0)
    return bisect_increasing(g, lo, hi, rtol)[0]


def inverse_increasing(f, y, max_iter=MAX_ITER):
    """Elementwise inverse of an increasing ``f`` with ``f(0) = 0``.

    Vectorized bisection; brackets are found by doubling from 1, then
    bisected to (nearly) machine precision.
    """
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = (y > 0) & np.isfinite(y)
    out[np.isinf(y)] = np.inf
    if not pos.any():
        return out
    yy = y[pos]
    lo = np.ones_like(yy)
    hi = np.ones_like(yy)
    up = f(hi) < yy
    it = 0
    while up.any():
        lo[up] = hi[up]
        hi[up] *= 2.0
        up = f(hi) < yy
        it += 1
        if it > 2100:
            raise ConvergenceError("inverse: upward bracket failed")
    down = f(lo) >= yy
    it = 0
    while down.any():
        hi[down] = lo[down]
        lo[down] *= 0.5
        down = (f(lo) >= yy) & (lo > 0)
        it += 1
        if it > 2100:
            raise ConvergenceError("inverse: downward bracket failed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = f(mid) < yy
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4 * np.finfo(float).eps * hi):
            break
    else:
        raise ConvergenceError(f"inverse: bisection exceeded {max_iter} iterations")
    out[pos] = 0.5 * (lo + hi)
    return out
