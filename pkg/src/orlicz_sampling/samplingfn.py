"""Sampling function of an N-function and the interpolating counterpart.

For ``0 < t <= 1`` the raw bound is ``r(t) = inf_{x > 1/t} Psi(t x) / Psi(x)``;
the sampling function is the greatest convex minorant of ``r``.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

X_POINTS = 400
X_SPAN = 1e8
DEFAULT_T_GRID = np.logspace(-6, 0, 200)


@dataclass(frozen=True)
class RawBound:
    value: float
    argext: float
    stabilized: bool


def _ratios(Psi, t, x_points, x_span):
    if not 0 < t <= 1:
        raise ParameterError("t must lie in (0, 1]")
    if x_points < 300:
        raise ParameterError("use at least 300 x-grid points")
    # grid starts at the open endpoint 1/t, where the infimum is approached
    x = np.logspace(np.log10(1 / t), np.log10(x_span / t), x_points)
    return x, Psi(t * x) / Psi(x)


def _stable(vals, x_points, extreme):
    # still moving over the last decade of the grid -> not stabilized
    per_decade = x_points / np.log10(X_SPAN)
    k = int(np.ceil(per_decade))
    last, before = vals[-1], vals[-1 - k]
    run = extreme(vals)
    moving = extreme([last, before]) == last and abs(last - before) > 1e-9 * abs(last)
    return not (moving and last == run)


def raw_sampling_bound(Psi, t, x_points=X_POINTS, x_span=X_SPAN):
    """``inf Psi(t x) / Psi(x)`` over a log grid on ``[1/t, x_span/t]``.

    ``stabilized`` is false when the running infimum is still decreasing at
    the right end of the grid.
    """
    x, r = _ratios(Psi, t, x_points, x_span)
    i = int(np.argmin(r))
    return RawBound(float(r[i]), float(x[i]), _stable(r, x_points, np.min))


def raw_interpolating_bound(Psi, t, x_points=X_POINTS, x_span=X_SPAN):
    """``sup Psi(t x) / Psi(x)`` over the same grid."""
    x, r = _ratios(Psi, t, x_points, x_span)
    i = int(np.argmax(r))
    return RawBound(float(r[i]), float(x[i]), _stable(r, x_points, np.max))


# ---------------------------------------------------------------------------
# hulls
# ---------------------------------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(t, y):
    """Indices of the lower convex hull vertices (monotone chain, ``t`` increasing)."""
    t, y = np.asarray(t, float), np.asarray(y, float)
    if np.any(np.diff(t) <= 0):
        raise ParameterError("t must be strictly increasing")
    hull = []
    for i in range(t.size):
        while len(hull) >= 2 and _cross((t[hull[-2]], y[hull[-2]]), (t[hull[-1]], y[hull[-1]]),
                                        (t[i], y[i])) <= 0:
            hull.pop()
        hull.append(i)
    return np.asarray(hull, dtype=int)


def convex_minorant(t, y):
    """Greatest convex minorant of the points, evaluated on ``t``."""
    v = lower_hull(t, y)
    return np.interp(t, t[v], y[v]), v


def secant_majorant(t, y):
    """Convex majorant candidate: the max of the lines through consecutive points."""
    t, y = np.asarray(t, float), np.asarray(y, float)
    if t.size < 2:
        return y.copy(), np.arange(t.size)
    slope = np.diff(y) / np.diff(t)
    lines = y[:-1][:, None] + slope[:, None] * (t[None, :] - t[:-1][:, None])
    env = np.maximum(lines.max(axis=0), y)
    touch = np.flatnonzero(np.isclose(env, y, rtol=1e-12, atol=0))
    return env, touch


def second_differences(t, y):
    """Divided second differences; non-negative for convex data."""
    t, y = np.asarray(t, float), np.asarray(y, float)
    s = np.diff(y) / np.diff(t)
    return np.diff(s) / (0.5 * (t[2:] - t[:-2]))


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def closed_form(Psi, t, kind="sampling"):
    """Reference shape for catalogue families, or ``None``.

    power ``t^a``: ``t^a`` for both kinds.  power_log ``t^a log^b(1+t)``:
    ``t^a log^{-b}(1 + 1/t)`` (sampling) and ``t^a`` (interpolating).
    """
    t = np.asarray(t, float)
    if Psi.family == "power":
        return t ** Psi.alpha
    if Psi.family == "power_log":
        if kind == "sampling":
            return t ** Psi.alpha * np.log1p(1 / t) ** (-Psi.beta)
        return t ** Psi.alpha
    return None


@dataclass(frozen=True)
class EnvelopeTable:
    phi: str
    kind: str
    t: np.ndarray
    raw: np.ndarray
    envelope: np.ndarray
    vertices: np.ndarray
    stabilized: np.ndarray
    closed_form: np.ndarray = None
    canonical: bool = True

    HEADER = ("t", "raw", "envelope", "closed_form", "ratio")

    @property
    def ratio(self):
        if self.closed_form is None:
            return None
        return self.envelope / self.closed_form

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.HEADER)
        cf, rt = self.closed_form, self.ratio
        for i in range(self.t.size):
            tail = ["", ""] if cf is None else [f"{cf[i]:.17g}", f"{rt[i]:.17g}"]
            w.writerow([f"{self.t[i]:.17g}", f"{self.raw[i]:.17g}", f"{self.envelope[i]:.17g}"]
                       + tail)
        return buf.getvalue()


def _grid(t_grid):
    t = np.sort(np.asarray(DEFAULT_T_GRID if t_grid is None else t_grid, float))
    if t.size < 2 or t[0] <= 0 or t[-1] > 1:
        raise ParameterError("t-grid must have at least two points in (0, 1]")
    return t


def sampling_function(Psi, t_grid=None, x_points=X_POINTS):
    """Raw infimum bound on the grid and its greatest convex minorant."""
    t = _grid(t_grid)
    raws = [raw_sampling_bound(Psi, s, x_points) for s in t]
    r = np.array([b.value for b in raws])
    env, v = convex_minorant(t, r)
    return EnvelopeTable(Psi.label, "sampling", t, r, env, v,
                         np.array([b.stabilized for b in raws]), closed_form(Psi, t, "sampling"))


def interpolating_bound(Psi, t_grid=None, x_points=X_POINTS):
    """Raw supremum bound and a convex majorant candidate (not unique)."""
    t = _grid(t_grid)
    raws = [raw_interpolating_bound(Psi, s, x_points) for s in t]
    r = np.array([b.value for b in raws])
    env, v = secant_majorant(t, r)
    return EnvelopeTable(Psi.label, "interpolating", t, r, env, v,
                         np.array([b.stabilized for b in raws]),
                         closed_form(Psi, t, "interpolating"), canonical=False)


@dataclass(frozen=True)
class SlopeEstimate:
    value: float
    raw_slope: float
    correction: float


def loglog_slope_at_zero(t, y, decades=1.0):
    """Slope of ``log y`` against ``log t`` as ``t -> 0``.

    Local slopes at the smallest grid interval and about ``decades`` higher
    are extrapolated in ``1 / |log t|``, which removes a ``c / log(1/t)``
    drift such as the one produced by a logarithmic factor.
    """
    t, y = np.asarray(t, float), np.asarray(y, float)
    lt, ly = np.log(t), np.log(y)
    s = np.diff(ly) / np.diff(lt)
    mid = 0.5 * (lt[1:] + lt[:-1])
    j = int(np.searchsorted(mid, mid[0] + decades * np.log(10)))
    if j >= s.size or j == 0:
        raise ParameterError("grid too short for the requested decade span")
    L1, L2 = abs(mid[0]), abs(mid[j])
    est = (L1 * s[0] - L2 * s[j]) / (L1 - L2)
    return SlopeEstimate(float(est), float(s[0]), float(est - s[0]))
