"""Dirichlet-kernel norms, their integral bracket, and Hilbert-transform estimates.

All torus measures are normalized (``dx / 2pi``) except the middle term of
:func:`verify_dirichlet_lemma`, which is the unnormalized integral
``int_T phi(|D_n| / lam) dx`` to match the two half-line bounds.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import _quad
from .errors import ParameterError
from .nfunction import make_nfunction
from .norms import TorusRule, continuous_modular, luxemburg_norm_continuous
from .sampling import FamilySpec, TOL_REL, build_family, make_report
from .trigpoly import dirichlet, hilbert_transform, project, sample_uniform

FOUR_PI = 4 * np.pi


def dirichlet_norm(nf, n):
    """``lambda_n = ||D_n||_{L^phi}``."""
    if n < 0:
        raise ParameterError("n must be non-negative")
    return luxemburg_norm_continuous(nf, dirichlet(n)).value


# ---------------------------------------------------------------------------
# integral bracket for the Dirichlet kernel modular
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletLemmaCheck:
    """``lower <= middle <= upper_4pi`` with
    ``lower = (1/lam) int_0^{3(2n+1)/(2 pi lam)} phi(t)/t^2 dt``,
    ``middle = int_T phi(|D_n|/lam) dx`` and
    ``upper_4pi = (4 pi/lam) int_0^{(2n+1)/lam} phi(2t)/t^2 dt``.

    ``lower_bound`` adds the certified head remainder to ``lower`` so that
    the comparison is conservative.  ``upper_2pi`` is half of ``upper_4pi``.
    """

    phi: str
    n: int
    lam: float
    lower: float
    lower_bound: float
    middle: float
    upper_4pi: float

    @property
    def upper_2pi(self):
        return self.upper_4pi / 2

    @property
    def lower_holds(self):
        return self.lower_bound <= self.middle * (1 + TOL_REL)

    @property
    def upper_holds(self):
        return self.middle <= self.upper_4pi * (1 + TOL_REL)

    @property
    def upper_2pi_holds(self):
        return self.middle <= self.upper_2pi * (1 + TOL_REL)

    @property
    def holds(self):
        return self.lower_holds and self.upper_holds

    def reports(self, nf):
        case = f"lam={self.lam:.17g}"
        wit = f"dirichlet n={self.n}"
        detail = {"upper_2pi_holds": self.upper_2pi_holds}
        return (make_report("bracket_lower", nf, self.n, case, self.lower_bound, self.middle, wit),
                make_report("bracket_upper", nf, self.n, case, self.middle, self.upper_4pi, wit,
                            detail=detail))


def lemma_bounds(nf, n, lam):
    """The two half-line integrals of the bracket, as ``(lower, lower + remainder, upper_4pi)``."""
    if lam <= 0:
        raise ParameterError("lambda must be positive")
    N = 2 * n + 1
    low = _quad.integral_from_zero(nf, 3 * N / (2 * np.pi * lam), q=2.0)
    up = _quad.integral_from_zero(nf, N / lam, q=2.0, scale=2.0)
    return low.value / lam, (low.value + low.remainder_bound) / lam, FOUR_PI * up.value / lam


def verify_dirichlet_lemma(nf, n, lam, rule=None):
    """Evaluate all three quantities of the Dirichlet-kernel bracket at ``lam``."""
    lower, lower_bound, upper = lemma_bounds(nf, n, lam)
    f = dirichlet(n)
    middle = 2 * np.pi * _modular(nf, f, lam, rule)
    return DirichletLemmaCheck(nf.label, int(n), float(lam), lower, lower_bound, middle, upper)


def _modular(nf, f, lam, rule):
    if rule is None:
        return continuous_modular(nf, f, lam).value
    # same doubling rule as continuous_modular, on a precomputed TorusRule
    prev = rule.integrate(lambda a: nf(a / lam), 0)
    level = 1
    while True:
        cur = rule.integrate(lambda a: nf(a / lam), level)
        if abs(cur - prev) <= 1e-11 * max(1.0, abs(cur)):
            return cur
        prev, level = cur, level + 1


def lemma_closed_forms_square(n, lam):
    """``(lower, middle, upper_4pi)`` for ``phi = t^2``."""
    N = 2 * n + 1
    return 3 * N / (2 * np.pi * lam ** 2), 2 * np.pi * N / lam ** 2, 16 * np.pi * N / lam ** 2


@dataclass(frozen=True)
class DirichletNormTable:
    phi: str
    n: np.ndarray
    lam: np.ndarray
    lower: np.ndarray
    middle: np.ndarray
    upper_4pi: np.ndarray
    upper_2pi_holds: np.ndarray

    HEADER = ("n", "lambda_n", "lower_bound", "middle", "upper_bound_4pi", "upper_bound_2pi_holds")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.HEADER)
        for row in zip(self.n, self.lam, self.lower, self.middle, self.upper_4pi,
                       self.upper_2pi_holds):
            w.writerow([str(int(row[0]))] + [f"{x:.17g}" for x in row[1:5]]
                       + ["true" if row[5] else "false"])
        return buf.getvalue()


def dirichlet_table(nf, degrees):
    """``lambda_n`` and the bracket evaluated at ``lambda_n`` for each degree."""
    rows = []
    for n in degrees:
        lam = dirichlet_norm(nf, n)
        chk = verify_dirichlet_lemma(nf, n, lam)
        rows.append((n, lam, chk.lower, chk.middle, chk.upper_4pi, chk.upper_2pi_holds))
    cols = list(zip(*rows)) if rows else [()] * 6
    return DirichletNormTable(nf.label, *(np.asarray(c) for c in cols))


def verify_lambda_monotonicity(nf, n_max, lambdas=None):
    """``lambda_n <= 4 pi lambda_{n+1}`` for ``n < n_max``; reports the worst ``n``.

    ``lambdas`` may supply precomputed ``lambda_0..lambda_{n_max}``.
    """
    if n_max < 1:
        raise ParameterError("n_max must be at least 1")
    lam = np.asarray(lambdas if lambdas is not None
                     else [dirichlet_norm(nf, n) for n in range(n_max + 1)], dtype=float)
    if lam.size < n_max + 1:
        raise ParameterError(f"need {n_max + 1} values of lambda_n")
    ratio = lam[:n_max] / (FOUR_PI * lam[1:n_max + 1])
    i = int(np.argmax(ratio))
    return make_report("lambda_monotone", nf, n_max, f"n={i:03d}", lam[i], FOUR_PI * lam[i + 1],
                       f"dirichlet n={i},{i + 1}", detail={"worst_ratio": float(ratio[i]),
                                                           "comparisons": int(n_max)})


# ---------------------------------------------------------------------------
# Hilbert transform estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HilbertNormEstimate:
    """Lower bound ``sup ||Hf|| / ||f||`` over a family, with its maximizer."""

    value: float
    witness: str
    n: int
    count: int


def estimate_hilbert_norm(nf, family=FamilySpec(), seed=None, n=16):
    """Family sup of ``||Hf||_{L^phi} / ||f||_{L^phi}`` at degree ``n``."""
    if seed is not None:
        family = FamilySpec(family.kind, family.count, seed)
    cases = build_family(n, family)
    best, wit = -1.0, ""
    for case in cases:
        den = luxemburg_norm_continuous(nf, case.poly).value
        if den <= 0:
            continue
        r = luxemburg_norm_continuous(nf, hilbert_transform(case.poly)).value / den
        if r > best:
            best, wit = r, f"{case.case_id} {case.witness}"
    if best < 0:
        raise ParameterError("family has no nonzero member")
    return HilbertNormEstimate(float(best), wit, int(n), len(cases))


@dataclass(frozen=True)
class WeakTypeEstimate:
    """``sup_t t |{|Hf| > t}| / ||f||_1`` in the normalized measure ``dx/2pi``.

    ``measure_error`` is the resolution ``1 / grid_size`` of the counted
    level-set measure.
    """

    value: float
    t_star: float
    measure_error: float
    grid_size: int


def weak_type_estimate(f, grid_size=2 ** 14):
    """Level-set measures counted on a uniform grid; the sup over
    ``t in [1e-3 max|Hf|, max|Hf|)`` is taken exactly on the grid values."""
    if grid_size < 2 ** 12:
        raise ParameterError("grid_size must be at least 4096")
    if grid_size <= 2 * f.degree:
        raise ParameterError("grid_size must exceed 2n")
    h = np.sort(np.abs(sample_uniform(hilbert_transform(f), grid_size)))
    top = h[-1]
    l1 = luxemburg_norm_continuous(make_nfunction("power", 1.0), f).value
    if top <= 1e-14 * max(1.0, np.abs(f.coeffs).max()) or l1 <= 0:
        return WeakTypeEstimate(0.0, 0.0, 1.0 / grid_size, grid_size)
    # t -> t * |{|Hf| > t}| peaks as t increases to a grid value v_j,
    # where the measure is #{|Hf| >= v_j} / M
    t0 = 1e-3 * top
    keep = h >= t0
    v = h[keep]
    count_ge = grid_size - np.searchsorted(h, v, side="left")
    cand = v * count_ge / grid_size
    j = int(np.argmax(cand))
    best, t_star = float(cand[j]), float(v[j])
    at_t0 = t0 * np.count_nonzero(h > t0) / grid_size
    if at_t0 > best:
        best, t_star = float(at_t0), float(t0)
    return WeakTypeEstimate(best / l1, t_star, 1.0 / grid_size, grid_size)


def verify_projection_bound(nf, g_family, n, hnorm_estimate):
    """``||project(g, n)|| <= ((1 + h)/2)^2 ||g||`` for each ``g``.

    ``h`` is only a lower bound for the operator norm of ``H``, so a
    violation is reported as inconclusive (``hard=False``) rather than as a
    failure.
    """
    h = float(getattr(hnorm_estimate, "value", hnorm_estimate))
    K = ((1 + h) / 2) ** 2
    out = []
    for i, g in enumerate(g_family):
        if g.degree <= n:
            raise ParameterError(f"family member {i} has degree {g.degree} <= n={n}")
        lhs = luxemburg_norm_continuous(nf, project(g, n)).value
        rhs = K * luxemburg_norm_continuous(nf, g).value
        out.append(make_report("projection", nf, n, f"{i:03d}", lhs, rhs,
                               f"degree {g.degree}", hard=False, detail={"hnorm": h}))
    return out


def projection_tally(reports):
    """``{"pass": k, "inconclusive": m}``."""
    p = sum(r.passed for r in reports)
    return {"pass": p, "inconclusive": len(reports) - p}
