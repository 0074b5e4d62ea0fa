"""Luxemburg norms on the torus, on ``l_n`` and on ``L(omega_n)``."""

from dataclasses import dataclass

import numpy as np

from ._roots import bisect_increasing, expand_bracket
from .errors import ConvergenceError, ParameterError
from .trigpoly import sample_nodes, sample_uniform

QUAD_RTOL = 1e-11
MAX_POINTS = 2 ** 22
NORM_RTOL = 1e-12
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class NormResult:
    kind: str
    value: float
    residual: float
    bracket_width: float
    points: int
    converged: bool

    def csv_row(self):
        return [self.kind, f"{self.value:.17g}", f"{self.residual:.17g}",
                str(self.points), "true" if self.converged else "false"]


@dataclass(frozen=True)
class Quadrature:
    value: float
    points: int


def start_points(f):
    return max(256, 8 * (2 * f.degree + 1))


def evaluate_horner(f, x):
    """``f(x)`` via Horner's scheme in ``z = exp(ix)`` (cheaper than direct sums)."""
    z = np.exp(1j * np.asarray(x, dtype=float))
    return np.polyval(f.coeffs[::-1], z) * z ** (-f.degree)


def _golden_min(g, a, b, xatol=1e-14):
    """Vectorized golden-section search for minima of ``g`` on ``[a_i, b_i]``."""
    r = (np.sqrt(5) - 1) / 2
    c, d = b - r * (b - a), a + r * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(200):
        if np.all(b - a <= xatol):
            break
        left = gc < gd
        # keep [a, d] (new interior point on the left) or [c, b] (on the right)
        a, b = np.where(left, a, c), np.where(left, d, b)
        keep = np.where(left, c, d)
        gkeep = np.where(left, gc, gd)
        new = np.where(left, b - r * (b - a), a + r * (b - a))
        gnew = g(new)
        c, d = np.where(left, new, keep), np.where(left, keep, new)
        gc, gd = np.where(left, gnew, gkeep), np.where(left, gkeep, gnew)
    return (a + b) / 2


def find_zeros(f, dip=1.0):
    """Local minima of ``|f|`` below ``dip * max|f|``; these include all real zeros.

    Every grid minimum on ``16(2n+1)`` points is refined by golden-section
    search before the threshold is applied, so a zero between two coarse
    grid points is not lost.  Cutting the torus at a minimum that is not a
    zero is harmless (and helps near-zeros), hence the default keeps all.
    """
    n = f.degree
    if n == 0:
        return np.empty(0)
    M = 16 * (2 * n + 1)
    v = np.abs(sample_uniform(f, M))
    idx = np.flatnonzero((v <= np.roll(v, 1)) & (v < np.roll(v, -1)))
    if idx.size == 0:
        return np.empty(0)
    h = 2 * np.pi / M
    g = lambda x: np.abs(evaluate_horner(f, x))
    x = _golden_min(g, h * (idx - 1.0), h * (idx + 1.0))
    x = x[g(x) <= dip * v.max()]
    out = np.sort(x % (2 * np.pi))
    if out.size > 1:
        keep = np.append(np.diff(out) > 1e-12, out[-1] - out[0] < 2 * np.pi - 1e-12)
        out = out[keep]
    return out


def _sin2_rule(m):
    """Trapezoid nodes/weights on [0, 1] after ``u -> u - sin(2 pi u)/(2 pi)``."""
    u = np.arange(1, m) / m
    return u - np.sin(2 * np.pi * u) / (2 * np.pi), (1 - np.cos(2 * np.pi * u)) / m


class TorusRule:
    """Quadrature for ``(1/2pi) int_T F(|f(x)|) dx`` with refinement levels.

    Without zeros of ``f`` on the torus this is the uniform trapezoid rule,
    starting at ``max(256, 8(2n+1))`` points and doubling per level.  When
    ``|f|`` has zeros (kinks of the integrand) the torus is cut there and
    each piece gets the trapezoid rule after a sin^2 substitution that makes
    the piece's endpoint behaviour harmless.
    """

    def __init__(self, f):
        self.f = f
        self.breaks = find_zeros(f)
        self._cache = {}

    def points(self, level):
        return self.nodes(level)[0].size

    def nodes(self, level):
        if level in self._cache:
            return self._cache[level]
        f = self.f
        base = start_points(f)
        if self.breaks.size == 0:
            N = base * 2 ** level
            out = (np.abs(sample_uniform(f, N)), np.full(N, 1.0 / N))
        else:
            b = self.breaks
            lens = np.diff(np.append(b, b[0] + 2 * np.pi))
            xs, ws = [], []
            for a, L in zip(b, lens):
                m = max(16, int(np.ceil(base * L / (2 * np.pi)))) * 2 ** level
                u, w = _sin2_rule(m)
                xs.append(a + L * u)
                ws.append(w * L / (2 * np.pi))
            x, w = np.concatenate(xs), np.concatenate(ws)
            out = (np.abs(evaluate_horner(f, x)), w)
        self._cache = {k: v for k, v in self._cache.items() if k >= level - 1}
        self._cache[level] = out
        return out

    def integrate(self, F, level):
        a, w = self.nodes(level)
        return float(np.dot(w, F(a)))


def continuous_modular(nf, f, lam, rtol=QUAD_RTOL, max_points=MAX_POINTS, rule=None):
    """``(1/2pi) int phi(|f|/lam) dx``, refined by doubling until two
    successive values agree to ``rtol * max(1, value)``.

    ``rule`` may pass a :class:`TorusRule` of ``f`` built earlier.
    """
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    rule = rule or TorusRule(f)
    F = lambda a: nf(a / lam)
    prev = rule.integrate(F, 0)
    level = 1
    while True:
        if rule.points(level) > max_points:
            raise ConvergenceError(f"modular quadrature not stable at {rule.points(level - 1)} points")
        cur = rule.integrate(F, level)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return Quadrature(cur, rule.points(level))
        prev = cur
        level += 1


def _solve_unit_modular(modular, lam0, rtol, lo_hi=None):
    """Bisection for ``modular(lam) = 1`` (``modular`` decreasing in ``lam``)."""
    def g(lam):
        return 1.0 - modular(lam)

    if lo_hi is not None and g(lo_hi[0]) < 0 <= g(lo_hi[1]):
        lo, hi = lo_hi
    else:
        lo, hi = expand_bracket(g, lam0)
    lam, lo, hi, _ = bisect_increasing(g, lo, hi, rtol)
    return lam, hi - lo


def luxemburg_norm_continuous(nf, f, rtol=NORM_RTOL, quad_rtol=QUAD_RTOL,
                              max_points=MAX_POINTS, rule=None):
    """``inf{lam > 0 : (1/2pi) int phi(|f|/lam) <= 1}``.

    Bisection at a fixed quadrature level, then the level is raised until the
    modular at the computed root is stable; each refinement restarts from a
    narrow bracket around the previous root.
    """
    if not np.any(f.coeffs):
        return NormResult("L", 0.0, 0.0, 0.0, 0, True)
    rule = rule or TorusRule(f)
    level = 0
    lam0 = float(np.max(rule.nodes(0)[0]))
    bracket = None
    while True:
        def modular(x, level=level):
            return rule.integrate(lambda a: nf(a / x), level)

        lam, width = _solve_unit_modular(modular, lam0, rtol, bracket)
        m1 = modular(lam)
        if rule.points(level + 1) > max_points:
            raise ConvergenceError(f"norm quadrature not stable at {rule.points(level)} points")
        m2 = rule.integrate(lambda a: nf(a / lam), level + 1)
        level += 1
        if abs(m2 - m1) <= quad_rtol * max(1.0, m1):
            resid = abs(m2 - 1.0)
            return NormResult("L", lam, resid, width, rule.points(level), resid <= RESIDUAL_TOL)
        lam0 = lam
        bracket = (lam * (1 - 1e-6), lam * (1 + 1e-6))


def _discrete_norm(nf, samples, weight, kind, rtol):
    v = np.abs(np.asarray(samples))
    if not np.any(v):
        return NormResult(kind, 0.0, 0.0, 0.0, v.size, True)

    def modular(lam):
        return weight * float(np.sum(nf(v / lam)))

    lam, width = _solve_unit_modular(modular, float(np.max(v)), rtol)
    resid = abs(modular(lam) - 1.0)
    return NormResult(kind, lam, resid, width, v.size, resid <= RESIDUAL_TOL)


def discrete_modular_ln(nf, samples, lam):
    return float(np.sum(nf(np.abs(np.asarray(samples)) / lam)))


def discrete_modular_omega(nf, samples, lam):
    return float(np.mean(nf(np.abs(np.asarray(samples)) / lam)))


def discrete_norm_ln(nf, samples, rtol=NORM_RTOL):
    """``inf{lam : sum_k phi(|v_k|/lam) <= 1}``."""
    return _discrete_norm(nf, samples, 1.0, "l_n", rtol)


def discrete_norm_omega(nf, samples, n=None, rtol=NORM_RTOL):
    """``inf{lam : (1/(2n+1)) sum_k phi(|v_k|/lam) <= 1}``."""
    samples = np.asarray(samples)
    if n is not None and samples.size != 2 * n + 1:
        raise ParameterError(f"expected {2 * n + 1} samples, got {samples.size}")
    return _discrete_norm(nf, samples, 1.0 / samples.size, "omega_n", rtol)


@dataclass(frozen=True)
class NormTriple:
    continuous: NormResult
    ln: NormResult
    omega: NormResult


def all_norms(nf, f, n=None, rule=None):
    """The three norms of ``f`` with node samples taken on the ``n`` grid."""
    v = sample_nodes(f, n)
    return NormTriple(luxemburg_norm_continuous(nf, f, rule=rule), discrete_norm_ln(nf, v),
                      discrete_norm_omega(nf, v))
