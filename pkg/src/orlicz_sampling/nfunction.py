"""N-functions and the scalar quantities the sampling inequalities depend on.

An :class:`NFunction` is an immutable, vectorized evaluator for a convex
Orlicz generator ``phi`` together with its density ``phi'``.  The catalogue
families are

* ``power``          ``t**alpha``
* ``power_log``      ``t**alpha * log(1+t)**beta``
* ``power_log_log``  ``t**alpha * log(1+t)**beta * log(1+log(1+t))**gamma``

optionally rescaled so that ``phi(1) = 1``.  Arbitrary generators can be
wrapped with :meth:`NFunction.custom`.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _quad
from ._roots import bisect_increasing, expand_bracket, inverse_increasing
from .errors import ConvergenceError, NoCertificate, ParameterError

FAMILIES = ("power", "power_log", "power_log_log", "custom")

# validation / scan grids
VALIDATION_GRID = np.logspace(-8, 8, 3201)
DELTA2_GRID = np.logspace(-8, 8, 3201)
INDEX_S_GRID = np.logspace(-8, 8, 400)


@dataclass(frozen=True)
class NFunction:
    """Convex Orlicz generator with density, inverse and conjugate.

    Instances are callable on scalars or arrays.  ``scale`` is the factor
    applied to the raw family formula (``1/phi_raw(1)`` when normalized).
    """

    family: str
    alpha: float
    beta: float = 0.0
    gamma: float = 0.0
    scale: float = 1.0
    normalized: bool = False
    name: Optional[str] = None
    raw_phi: Optional[Callable] = field(default=None, repr=False, compare=False)
    raw_density: Optional[Callable] = field(default=None, repr=False, compare=False)

    # -- construction -----------------------------------------------------

    @classmethod
    def custom(cls, phi, density, name="custom", normalize=True):
        """Wrap user callables ``phi`` and ``density`` (both vectorized)."""
        nf = cls("custom", float("nan"), name=name, raw_phi=phi, raw_density=density)
        return _finish(nf, normalize)

    # -- evaluation -------------------------------------------------------

    def _raw(self, t):
        if self.family == "custom":
            return np.asarray(self.raw_phi(t), dtype=float)
        a, b, g = self.alpha, self.beta, self.gamma
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = t ** a
            if self.family in ("power_log", "power_log_log"):
                lg = np.log1p(t)
                val = val * lg ** b
                if self.family == "power_log_log":
                    val = val * np.log1p(lg) ** g
        return np.where(t > 0, val, 0.0)

    def _raw_density(self, t):
        if self.family == "custom":
            return np.asarray(self.raw_density(t), dtype=float)
        a, b, g = self.alpha, self.beta, self.gamma
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.family == "power":
                d = a * t ** (a - 1.0)
                at_zero = 1.0 if a == 1.0 else 0.0
            elif self.family == "power_log":
                lg = np.log1p(t)
                d = t ** (a - 1.0) * lg ** (b - 1.0) * (a * lg + b * t / (1.0 + t))
                at_zero = 1.0 if a + b == 1.0 else 0.0
            else:
                lg = np.log1p(t)
                ll = np.log1p(lg)
                d = (t ** (a - 1.0) * lg ** (b - 1.0) * ll ** (g - 1.0)
                     * (a * lg * ll + b * t * ll / (1.0 + t) + g * t / (1.0 + t)))
                at_zero = 1.0 if a + b + g == 1.0 else 0.0
        return np.where(t > 0, d, at_zero)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self.scale * self._raw(t)
        return out if out.ndim else float(out)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        out = self.scale * self._raw_density(t)
        return out if out.ndim else float(out)

    def inverse(self, y):
        """``phi^{-1}(y)`` by bisection (bracket doubled from 1)."""
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ParameterError("inverse needs y >= 0")
        out = inverse_increasing(self, y)
        return out if out.ndim else float(out)

    def conjugate(self, s):
        """Complementary function ``phi*(s) = sup_t (s t - phi(t))``.

        The maximizer solves ``phi'(t) = s``; when the density never reaches
        ``s`` the supremum is infinite and :class:`ConvergenceError` is raised.
        """
        s = float(s)
        if s < 0:
            raise ParameterError("conjugate needs s >= 0")
        if s == 0.0:
            return 0.0

        def g(t):
            return self.density(t) - s

        try:
            lo, hi = expand_bracket(g, 1.0)
        except ConvergenceError:
            if g(1.0) >= 0:
                # density already >= s arbitrarily close to 0: maximizer is t = 0
                return 0.0
            raise
        t = bisect_increasing(g, lo, hi, rtol=1e-14)[0]
        return s * t - self(t)

    @property
    def label(self):
        if self.family == "custom":
            return self.name or "custom"
        nums = [self.alpha]
        if self.family != "power":
            nums.append(self.beta)
        if self.family == "power_log_log":
            nums.append(self.gamma)
        body = ",".join(f"{x:g}" for x in nums)
        return f"{self.family}({body})" + ("" if self.normalized or self.family == "power" else "[raw]")

    def to_record(self):
        """Plain-text spec record (consumed by the CLI config)."""
        return {"family": self.family, "alpha": self.alpha, "beta": self.beta,
                "gamma": self.gamma, "normalize": self.normalized}


def make_nfunction(family, alpha, beta=0.0, gamma=0.0, normalize=True):
    """Build and validate a catalogue N-function.

    Raises :class:`ParameterError` for an unknown family, ``alpha <= 1`` in a
    log family, a density that fails to be non-decreasing on the validation
    grid, or non-finite values.
    """
    if family not in FAMILIES or family == "custom":
        raise ParameterError(f"unknown family {family!r}; use NFunction.custom for callables")
    alpha, beta, gamma = float(alpha), float(beta), float(gamma)
    if family == "power":
        if alpha < 1.0:
            raise ParameterError("power family needs alpha >= 1")
        beta = gamma = 0.0
    else:
        if alpha <= 1.0:
            raise ParameterError(f"{family} needs alpha > 1")
        if family == "power_log":
            gamma = 0.0
    return _finish(NFunction(family, alpha, beta, gamma), normalize)


def _finish(nf, normalize):
    t = VALIDATION_GRID
    with np.errstate(all="ignore"):
        vals = nf(t)
        dens = nf.density(t)
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(dens))):
        raise ParameterError(f"{nf.label}: non-finite values on the validation grid")
    if np.any(vals <= 0) or np.any(np.diff(vals) <= 0):
        raise ParameterError(f"{nf.label}: not strictly increasing on (0, inf)")
    if np.any(np.diff(dens) < -1e-12 * np.abs(dens[1:])):
        raise ParameterError(f"{nf.label}: density is not non-decreasing (not convex)")
    if normalize:
        raw1 = float(nf(1.0)) / nf.scale
        nf = NFunction(nf.family, nf.alpha, nf.beta, nf.gamma, 1.0 / raw1, True,
                       nf.name, nf.raw_phi, nf.raw_density)
    return nf


# ---------------------------------------------------------------------------
# Delta_2 constant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Delta2Estimate:
    value: float
    non_delta2: bool
    argsup: float


def delta2_constant(nf, grid=DELTA2_GRID):
    """Sup of ``phi(2t)/phi(t)`` on a log grid over ``[1e-8, 1e8]``.

    ``non_delta2`` is set when the ratio still grows by more than 0.1 percent
    over the last decade towards either end of the grid.
    """
    t = np.asarray(grid, dtype=float)
    ratio = nf(2 * t) / nf(t)
    i = int(np.argmax(ratio))
    per_decade = max(1, int(round((len(t) - 1) / np.log10(t[-1] / t[0]))))
    grows = False
    for end, inner in ((0, per_decade), (len(t) - 1, len(t) - 1 - per_decade)):
        if ratio[end] > ratio[inner] * (1 + 1e-3) and ratio[end] >= ratio[i] * (1 - 1e-12):
            grows = True
    return Delta2Estimate(float(ratio[i]), grows, float(t[i]))


# ---------------------------------------------------------------------------
# restricted super/sub-multiplicativity
# ---------------------------------------------------------------------------

C_STEP = 1.0 + 1e-4


@dataclass(frozen=True)
class MultiplicativityCertificate:
    """Empirical constant ``C`` for ``phi(a)phi(b) <= phi(Cab)`` (super) or
    ``phi(Cab) <= phi(a)phi(b)`` (sub) on ``a < 1 <= ab < b``."""

    mode: str
    C: float
    grid: dict
    witness: tuple
    margin: float
    required: float


def _admissible_pairs(a_grid, b_grid):
    A, B = np.meshgrid(a_grid, b_grid, indexing="ij")
    ok = (A < 1.0) & (A * B >= 1.0) & (A * B < B)
    return A[ok], B[ok]


def multiplicativity_constant(nf, mode="super", n_a=400, n_b=400,
                              a_range=(1e-6, 1.0), b_range=(1.0, 1e6)):
    """Smallest (super) / largest (sub) ``C`` on a geometric search grid that
    satisfies the restricted multiplicativity inequality at every admissible
    grid pair.

    The per-pair requirement ``phi^{-1}(phi(a)phi(b)) / (ab)`` is computed
    directly; the certificate constant is the first candidate
    ``C_STEP**k`` beyond the worst pair and is re-verified on all pairs.
    """
    if mode not in ("super", "sub"):
        raise ParameterError("mode must be 'super' or 'sub'")
    if abs(float(nf(1.0)) - 1.0) > 1e-12:
        raise ParameterError("multiplicativity certificates need a normalized phi")
    a_grid = np.logspace(np.log10(a_range[0]), np.log10(a_range[1]), n_a, endpoint=False)
    b_grid = np.logspace(np.log10(b_range[0]), np.log10(b_range[1]), n_b + 1)[1:]
    a, b = _admissible_pairs(a_grid, b_grid)
    prod = nf(a) * nf(b)
    need = nf.inverse(prod) / (a * b)
    snap = 1e-12
    if mode == "super":
        i = int(np.argmax(need))
        req = float(need[i])
        if req > 1e6:
            raise NoCertificate(f"{nf.label}: super-multiplicativity needs C={req:.4g} > 1e6")
        C = 1.0 if req <= 1.0 + snap else C_STEP ** np.ceil(np.log(req) / np.log(C_STEP))
        lhs, rhs = prod, nf(C * a * b)
    else:
        i = int(np.argmin(need))
        req = float(need[i])
        if req < 1e-6:
            raise NoCertificate(f"{nf.label}: sub-multiplicativity needs C={req:.4g} < 1e-6")
        C = 1.0 if req >= 1.0 - snap else C_STEP ** np.floor(np.log(req) / np.log(C_STEP))
        lhs, rhs = nf(C * a * b), prod
    margin = float(np.min((rhs - lhs) / rhs))
    if margin < -snap:
        raise NoCertificate(f"{nf.label}: candidate C={C} fails re-verification ({margin:.3g})")
    grid = {"a_range": tuple(a_range), "b_range": tuple(b_range),
            "shape": (n_a, n_b), "pairs": int(a.size)}
    return MultiplicativityCertificate(mode, float(C), grid, (float(a[i]), float(b[i])),
                                       margin, req)


def certificate_holds(nf, cert, a, b, rtol=1e-12):
    """Elementwise check of the certificate inequality at given pairs."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    prod = nf(a) * nf(b)
    other = nf(cert.C * a * b)
    if cert.mode == "super":
        return prod <= other * (1 + rtol)
    return other <= prod * (1 + rtol)


# ---------------------------------------------------------------------------
# Matuszewska-Orlicz indices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexEstimate:
    alpha: float
    beta: float
    t_small: tuple
    t_large: tuple
    residual_alpha: float
    residual_beta: float


def dilation_sup(nf, t, s_grid=INDEX_S_GRID):
    """``h(t) = sup_s phi(t s) / phi(s)`` over the s-grid."""
    s = np.asarray(s_grid, float)
    return float(np.max(nf(t * s) / nf(s)))


def _richardson(nf, ts, s_grid):
    # log h(t) / log t = index + c / log t  (exact when h(t) = K t**index)
    vals = [np.log(dilation_sup(nf, t, s_grid)) / np.log(t) for t in ts]
    L1, L2 = abs(np.log(ts[0])), abs(np.log(ts[1]))
    est = (L2 * vals[1] - L1 * vals[0]) / (L2 - L1)
    return float(est), float(abs(est - vals[1]))


def matuszewska_indices(nf, t_small=(1e-5, 1e-6), t_large=(1e5, 1e6), s_grid=INDEX_S_GRID):
    """Estimate the lower/upper Matuszewska-Orlicz indices.

    ``log h(t) / log t`` is evaluated at two small (large) dilations and
    extrapolated in ``1/log t``, which removes a constant prefactor in
    ``h``.  Residuals record the size of the extrapolation correction.
    """
    a, ra = _richardson(nf, t_small, s_grid)
    b, rb = _richardson(nf, t_large, s_grid)
    return IndexEstimate(a, b, tuple(t_small), tuple(t_large), ra, rb)


# ---------------------------------------------------------------------------
# integral conditions controlling weak-type interpolation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionParams:
    sigma: float
    gamma: float
    p: float

    def __post_init__(self):
        if not (self.sigma > 0 and self.gamma > 0 and self.p > 1):
            raise ParameterError("need sigma > 0, gamma > 0, p > 1")


@dataclass(frozen=True)
class ConditionReport:
    kind: str
    params: dict
    sup_ratio: float
    argsup: float
    holds: bool
    remainder_bound: float
    s_range: tuple


CONDITION_S_RANGE = (1e-6, 1e6)
CONDITION_PER_DECADE = 200


def _s_grid(s_range, per_decade):
    lo, hi = np.log10(s_range[0]), np.log10(s_range[1])
    return np.logspace(lo, hi, int(round((hi - lo) * per_decade)) + 1)


def check_small_condition(nf, sigma, s_range=CONDITION_S_RANGE,
                          per_decade=CONDITION_PER_DECADE, tol=1e-6):
    """Worst ratio of ``(sigma s / phi(sigma s)) int_0^s phi(r)/r^2 dr`` to ``sigma``.

    The integral is accumulated panel by panel along the s-grid; the piece
    below ``s_min * 1e-12`` is bounded through the local power slope.
    """
    if sigma <= 0:
        raise ParameterError("sigma must be positive")
    s = _s_grid(s_range, per_decade)
    head = _quad.integral_from_zero(nf, s[0], q=2.0)
    pieces = _quad.panel_integrals(nf, 2.0, np.log(s))
    I = head.value + np.concatenate([[0.0], np.cumsum(pieces)])
    ratio = s * I / nf(sigma * s)
    i = int(np.argmax(ratio))
    return ConditionReport("small", {"sigma": sigma}, float(ratio[i]), float(s[i]),
                           bool(ratio[i] <= 1 + tol), head.remainder_bound, tuple(s_range))


def check_big_condition(nf, gamma, p, s_range=CONDITION_S_RANGE,
                        per_decade=CONDITION_PER_DECADE, tol=1e-6):
    """Worst ratio of ``((gamma s)^p / phi(gamma s)) int_s^inf phi(r)/r^(p+1) dr`` to ``gamma^p``.

    Raises :class:`ConvergenceError` when the tail beyond ``s_max * 1e12``
    cannot be bounded (local slope of ``phi`` not below ``p`` there).
    """
    if gamma <= 0 or p <= 1:
        raise ParameterError("need gamma > 0 and p > 1")
    s = _s_grid(s_range, per_decade)
    tail = _quad.integral_to_infinity(nf, s[-1], q=p + 1.0)
    pieces = _quad.panel_integrals(nf, p + 1.0, np.log(s))
    J = tail.value + np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    ratio = s ** p * J / nf(gamma * s)
    i = int(np.argmax(ratio))
    return ConditionReport("big", {"gamma": gamma, "p": p}, float(ratio[i]), float(s[i]),
                           bool(ratio[i] <= 1 + tol), tail.remainder_bound, tuple(s_range))


def prescan_condition_params(nf, grid=2.0 ** (np.arange(0, 61) / 2.0)):
    """Coarse search for a ``(sigma, gamma, p)`` triple satisfying both conditions.

    ``p`` is set half a unit above the largest local power slope seen on
    ``[1e-8, 1e8]``; ``sigma`` and ``gamma`` are the first passing values of
    ``grid``.
    """
    t = np.logspace(-8, 8, 801)
    top = float(np.max(t * nf.density(t) / nf(t)))
    p = np.ceil(2 * top) / 2 + 0.5
    sigma = next((x for x in grid if check_small_condition(nf, x).holds), None)
    gamma = next((x for x in grid if check_big_condition(nf, x, p).holds), None)
    if sigma is None or gamma is None:
        raise ConvergenceError(f"{nf.label}: no passing (sigma, gamma) on the prescan grid")
    return ConditionParams(float(sigma), float(gamma), float(p))


__all__ = [
    "NFunction", "make_nfunction", "Delta2Estimate", "delta2_constant",
    "MultiplicativityCertificate", "multiplicativity_constant", "certificate_holds",
    "IndexEstimate", "matuszewska_indices", "dilation_sup",
    "ConditionParams", "ConditionReport", "check_small_condition",
    "check_big_condition", "prescan_condition_params",
]
