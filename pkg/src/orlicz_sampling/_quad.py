"""Quadrature of ``phi(r) / r**q`` over half-lines via ``r = exp(u)``.

Composite Gauss-Legendre panels in ``u``; the neglected piece next to 0 or
infinity is bounded with the local power slope ``r phi'(r) / phi(r)``
measured just beyond the truncation point.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)
PANELS_PER_DECADE = 24
HEAD_CUT = 1e-12
TAIL_CUT = 1e12


@dataclass(frozen=True)
class Integral:
    value: float
    remainder_bound: float
    cut: float
    slope: float


def _panel_edges(a, b, per_decade=PANELS_PER_DECADE):
    """Panel edges in log-space covering ``[log a, log b]``."""
    la, lb = np.log(a), np.log(b)
    k = max(1, int(np.ceil((lb - la) / np.log(10.0) * per_decade)))
    return np.linspace(la, lb, k + 1)


def panel_integrals(phi, q, edges):
    """Integral of ``phi(r) r**-q dr`` over each log-panel ``[e_i, e_{i+1}]``."""
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    u = mid[:, None] + half[:, None] * _GL_X[None, :]
    r = np.exp(u)
    vals = phi(r) * np.exp((1.0 - q) * u)
    return half * (vals @ _GL_W)


def local_slopes(nf, r):
    r = np.asarray(r, dtype=float)
    return r * nf.density(r) / nf(r)


def head_remainder(nf, q, r_min):
    """Bound for ``int_0^{r_min} phi(r) r**-q dr``.

    Uses ``phi(r) <= phi(r_min) (r / r_min)**a`` for ``r < r_min`` with ``a`` the
    smallest local slope sampled on ``[r_min * 1e-3, r_min]``.
    """
    a = float(np.min(local_slopes(nf, r_min * np.logspace(-3, 0, 31))))
    if a <= q - 1.0:
        raise ConvergenceError(
            f"head of int phi(r)/r^{q:g} not certifiable: local slope {a:.6g} <= {q - 1:g}")
    return float(nf(r_min)) * r_min ** (1.0 - q) / (a - (q - 1.0)), a


def tail_remainder(nf, q, r_max):
    """Bound for ``int_{r_max}^inf phi(r) r**-q dr`` (needs local slope < q - 1)."""
    b = float(np.max(local_slopes(nf, r_max * np.logspace(0, 3, 31))))
    if b >= q - 1.0:
        raise ConvergenceError(
            f"tail of int phi(r)/r^{q:g} not certifiable: local slope {b:.6g} >= {q - 1:g}")
    return float(nf(r_max)) * r_max ** (1.0 - q) / ((q - 1.0) - b), b


def integral_from_zero(nf, upper, q=2.0, scale=1.0, cut=HEAD_CUT):
    """``int_0^upper phi(scale * r) r**-q dr`` with a certified head bound."""
    if upper <= 0:
        return Integral(0.0, 0.0, 0.0, float("nan"))
    sub = _Scaled(nf, scale)
    r_min = upper * cut
    rem, a = head_remainder(sub, q, r_min)
    val = float(np.sum(panel_integrals(sub, q, _panel_edges(r_min, upper))))
    return Integral(val, rem, r_min, a)


def integral_to_infinity(nf, lower, q, scale=1.0, cut=TAIL_CUT):
    """``int_lower^inf phi(scale * r) r**-q dr`` with a certified tail bound."""
    sub = _Scaled(nf, scale)
    r_max = lower * cut
    rem, b = tail_remainder(sub, q, r_max)
    val = float(np.sum(panel_integrals(sub, q, _panel_edges(lower, r_max))))
    return Integral(val, rem, r_max, b)


class _Scaled:
    """``r -> phi(c r)`` with matching density, for slope measurements."""

    def __init__(self, nf, c):
        self.nf, self.c = nf, float(c)

    def __call__(self, r):
        return self.nf(self.c * np.asarray(r, dtype=float))

    def density(self, r):
        return self.c * self.nf.density(self.c * np.asarray(r, dtype=float))
