"""Sampling inequalities between the torus norm and the two node norms.

Every check produces a :class:`VerificationReport` with ``ratio = lhs / rhs``;
a check passes when ``ratio <= 1 + TOL_REL``.
"""

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DegreeError, OrliczError, ParameterError
from .nfunction import certificate_holds, delta2_constant, multiplicativity_constant
from .norms import (TorusRule, all_norms, continuous_modular, discrete_modular_omega,
                    discrete_norm_ln, discrete_norm_omega)
from .trigpoly import (constant, dirichlet, embed, random_poly, sample_nodes,
                       spike_poly)

TOL_REL = 1e-7

CHECK_GROUPS = {
    "simple": ("simple",),
    "zygmund": ("zygmund",),
    "upper": ("upper_2c2", "upper_6c2"),
    "lower": ("lower_sampling", "lower_cphi", "cphi_bound"),
}
DEFAULT_CHECKS = ("simple", "zygmund", "upper", "lower")
CSV_HEADER = ("check", "phi", "n", "case_id", "lhs", "rhs", "ratio", "pass", "witness")


def _fmt(x):
    return f"{x:.17g}"


@dataclass(frozen=True)
class VerificationReport:
    check: str
    phi: str
    n: int
    case_id: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    witness: str
    hard: bool = True
    error: str = ""
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def status(self):
        if self.error:
            return "error"
        return "pass" if self.passed else "fail"

    @property
    def sort_key(self):
        return (self.check, self.phi, self.n, self.case_id)

    def csv_row(self):
        flag = {"pass": "true", "fail": "false", "error": "error"}[self.status]
        return [self.check, self.phi, str(self.n), self.case_id, _fmt(self.lhs),
                _fmt(self.rhs), _fmt(self.ratio), flag, self.witness]


def make_report(check, nf, n, case_id, lhs, rhs, witness, hard=True, detail=None):
    lhs, rhs = float(lhs), float(rhs)
    if rhs > 0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs <= 0 else np.inf
    return VerificationReport(check, nf.label, int(n), case_id, lhs, rhs, float(ratio),
                              bool(ratio <= 1 + TOL_REL), witness, hard, "", detail or {})


def error_report(check, nf, n, case_id, witness, exc):
    nan = float("nan")
    return VerificationReport(check, nf.label, int(n), case_id, nan, nan, nan, False, witness,
                              True, f"{type(exc).__name__}: {exc}")


# ---------------------------------------------------------------------------
# test families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Case:
    case_id: str
    kind: str
    poly: object
    witness: str


FAMILY_KINDS = ("mixed", "gaussian", "sparse", "lacunary", "spikes", "constants", "dirichlet")
N_LACUNARY = 10
N_SPARSE = 10
N_RANDOM_SPIKES = 8


@dataclass(frozen=True)
class FamilySpec:
    kind: str = "mixed"
    count: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ParameterError(f"unknown family kind {self.kind!r}")
        if self.count < 1:
            raise ParameterError("family count must be at least 1")


def _structured(n, seed):
    """Constants, spikes and Dirichlet kernels for degree ``n``."""
    N = 2 * n + 1
    out = [("const", constant(1.0, n), "const c=1"),
           ("const", constant(2.0 - 1.5j, n), "const c=2-1.5j")]
    for j in sorted({-n, 0, n}):
        out.append(("spike", spike_poly(n, [j]), f"spike S=[{j}]"))
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, 10 ** 6]))
    for _ in range(N_RANDOM_SPIKES):
        k = int(rng.integers(1, N + 1))
        S = sorted(int(j) for j in rng.choice(np.arange(-n, n + 1), size=k, replace=False))
        out.append(("spike", spike_poly(n, S), f"spike |S|={k} seed={seed}"))
    out.append(("spike", spike_poly(n, range(-n, n + 1)), f"spike S=all n={n}"))
    out.append(("dirichlet", dirichlet(n), f"dirichlet n={n}"))
    out.append(("dirichlet", embed(dirichlet(n // 2), n), f"dirichlet n={n // 2}"))
    return out


def _random_case(kind, n, seed, i):
    ss = np.random.SeedSequence([seed, n, i])
    return (kind, random_poly(n, ss, kind), f"{kind} seed=({seed},{n},{i})")


def build_family(n, spec=FamilySpec()):
    """Deterministic list of :class:`Case` of degree at most ``n``.

    The mixed family lists constants, spikes (single, random subsets and all
    nodes) and Dirichlet kernels, then 10 lacunary, 10 sparse and gaussian
    polynomials up to ``count``.  A family of a larger count extends the
    smaller one.
    """
    if n < 0:
        raise ParameterError("n must be non-negative")
    if spec.kind == "mixed":
        items = _structured(n, spec.seed)
        plan = ["lacunary"] * N_LACUNARY + ["sparse"] * N_SPARSE
        head = len(items)
        while len(items) < spec.count:
            i = len(items)
            kind = plan[i - head] if i - head < len(plan) else "gaussian"
            items.append(_random_case(kind, n, spec.seed, i))
        items = items[:spec.count]
    elif spec.kind in ("gaussian", "sparse", "lacunary"):
        items = [_random_case(spec.kind, n, spec.seed, i) for i in range(spec.count)]
    else:
        tag = {"constants": "const", "spikes": "spike", "dirichlet": "dirichlet"}[spec.kind]
        base = [it for it in _structured(n, spec.seed) if it[0] == tag]
        items = base[:spec.count]
    return [Case(f"{i:03d}-{kind}", kind, poly, wit) for i, (kind, poly, wit) in enumerate(items)]


# ---------------------------------------------------------------------------
# single checks
# ---------------------------------------------------------------------------

def _degree_ok(f, n):
    if f.degree > n:
        raise DegreeError(f"degree {f.degree} exceeds n={n}")


def verify_simple(nf, f, n, case_id="-", witness="-", norms=None):
    """``||f||_{omega_n} <= 3 ||f||_L``."""
    _degree_ok(f, n)
    norms = norms or all_norms(nf, f, n)
    return make_report("simple", nf, n, case_id, norms.omega.value, 3 * norms.continuous.value,
                       witness)


def verify_modular_zygmund(nf, f, n, case_id="-", witness="-", modulars=None):
    """``(1/(2n+1)) sum phi(|f(x_k)|/3) <= (1/2pi) int phi(|f|)``."""
    _degree_ok(f, n)
    if modulars is None:
        modulars = _zygmund_modulars(nf, f, n)
    lhs, rhs = modulars
    return make_report("zygmund", nf, n, case_id, lhs, rhs, witness)


def _zygmund_modulars(nf, f, n, rule=None):
    v = sample_nodes(f, n)
    lhs = discrete_modular_omega(nf, v, 3.0)
    rhs = continuous_modular(nf, f, 1.0, rule=rule).value if np.any(f.coeffs) else 0.0
    return lhs, rhs


def _pair_log(nf, cert, a, b):
    """Realized certificate pairs: how many leave the region or the grid,
    and whether the certificate inequality holds at all of them."""
    a, b = np.asarray(a, float), np.broadcast_to(np.asarray(b, float), np.shape(a))
    region = (a < 1) & (a * b >= 1) & (a * b < b)
    lo, hi = cert.grid["a_range"][0], cert.grid["b_range"][1]
    in_grid = (a >= lo) & (b <= hi)
    held = certificate_holds(nf, cert, a, b) if a.size else np.ones(0, bool)
    return {"pairs": int(a.size), "outside_region": int(np.sum(~region)),
            "outside_grid": int(np.sum(region & ~in_grid)),
            "certificate_fails": int(np.sum(region & ~held))}


def verify_upper_sampling(nf, f, n, cert, case_id="-", witness="-", norms=None):
    """``||f||_{l_n} <= 2C^2 phi^{-1}(2n+1) ||f||_{omega_n}`` and
    ``||f||_{l_n} <= 6C^2 phi^{-1}(2n+1) ||f||_L``.

    Returns the two reports (``upper_2c2``, ``upper_6c2``).
    """
    if cert.mode != "super":
        raise ParameterError("upper sampling needs a super-multiplicativity certificate")
    _degree_ok(f, n)
    norms = norms or all_norms(nf, f, n)
    C, N = cert.C, 2 * n + 1
    q = float(nf.inverse(N))
    w = norms.omega.value
    detail = {}
    if w > 0:
        p = np.abs(sample_nodes(f, n)) / w
        big = p >= C
        a = np.append(p[big] / (C * q), nf.inverse(1.0 / N))
        detail = _pair_log(nf, cert, a, q)
    ln = norms.ln.value
    return (make_report("upper_2c2", nf, n, case_id, ln, 2 * C ** 2 * q * w, witness,
                        detail=detail),
            make_report("upper_6c2", nf, n, case_id, ln, 6 * C ** 2 * q * norms.continuous.value,
                        witness, detail=detail))


def verify_lower_sampling(nf, f, n, cert, cphi, case_id="-", witness="-", norms=None,
                          claimed=False):
    """Lower sampling bounds.

    ``lower_sampling``: ``C phi^{-1}(2n+1) ||f||_{omega_n} <= 2 ||f||_{l_n}``.
    ``lower_cphi``: ``C phi^{-1}(2n+1) ||f||_L / C_phi <= 2 ||f||_{l_n}``.
    ``cphi_bound``: ``||f||_L <= C_phi ||f||_{omega_n}``.

    ``cphi`` is a :class:`CphiEstimate` or a number.  The last two checks are
    hard only when ``claimed`` is set; against an estimate drawn from the same
    family they are consistency checks.
    """
    if cert.mode != "sub":
        raise ParameterError("lower sampling needs a sub-multiplicativity certificate")
    if delta2_constant(nf).non_delta2:
        raise ParameterError(f"{nf.label} does not look Delta_2")
    _degree_ok(f, n)
    norms = norms or all_norms(nf, f, n)
    K = float(getattr(cphi, "value", cphi))
    C, N = cert.C, 2 * n + 1
    q = float(nf.inverse(N))
    ln, w, L = norms.ln.value, norms.omega.value, norms.continuous.value
    detail = {}
    if ln > 0:
        a = np.abs(sample_nodes(f, n)) / ln
        a = a[q * a >= 1]
        detail = _pair_log(nf, cert, a, q)
    return (make_report("lower_sampling", nf, n, case_id, C * q * w, 2 * ln, witness, detail=detail),
            make_report("lower_cphi", nf, n, case_id, C * q * L / K, 2 * ln, witness, hard=claimed,
                        detail={"cphi": K}),
            make_report("cphi_bound", nf, n, case_id, L, K * w, witness, hard=claimed,
                        detail={"cphi": K}))


# ---------------------------------------------------------------------------
# C_phi and the necessity check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CphiEstimate:
    """Sup of ``||f||_L / ||f||_{omega_n}`` over a family, with per-degree sups."""

    value: float
    family: str
    per_degree: dict
    argsup: tuple = ()


def cphi_from_norms(table, family="-"):
    """``table`` maps ``(n, case_id)`` to a :class:`NormTriple`."""
    per, arg = {}, {}
    for (n, cid), t in table.items():
        if t.omega.value <= 0:
            continue
        r = t.continuous.value / t.omega.value
        if r > per.get(n, -np.inf):
            per[n], arg[n] = r, cid
    if not per:
        raise ParameterError("family has no nonzero member")
    n_best = max(per, key=lambda k: (per[k], -k))
    return CphiEstimate(float(per[n_best]), family, {k: float(per[k]) for k in sorted(per)},
                        (n_best, arg[n_best]))


def estimate_cphi(nf, degrees, family=FamilySpec(), seed=None, jobs=1):
    """Empirical ``C_phi``: the largest ``||f||_L / ||f||_{omega_n}`` seen."""
    if seed is not None:
        family = FamilySpec(family.kind, family.count, seed)
    table = norm_table([nf], degrees, family, jobs)[nf.label]
    ok = {k: v for k, v in table.items() if not isinstance(v, Exception)}
    return cphi_from_norms(ok, f"{family.kind}:{family.count}:{family.seed}")


def necessity_check(nf, n, k, cert=None):
    """Spike with ``k`` ones: closed forms vs. bisection, and the implied constant.

    The report compares ``phi^{-1}((2n+1)/k)`` with
    ``C phi^{-1}(1/k) phi^{-1}(2n+1)``; ``C`` comes from ``cert`` (a
    super-multiplicativity certificate, measured if not given).
    """
    N = 2 * n + 1
    if not 1 <= k <= N:
        raise ParameterError(f"k must lie in [1, {N}]")
    if cert is None:
        cert = multiplicativity_constant(nf, "super")
    S = list(range(-n, -n + k))
    v = sample_nodes(spike_poly(n, S), n)
    ln_closed = 1.0 / float(nf.inverse(1.0 / k))
    om_closed = 1.0 / float(nf.inverse(N / k))
    ln_num = discrete_norm_ln(nf, v).value
    om_num = discrete_norm_omega(nf, v, n).value
    lhs = float(nf.inverse(N / k))
    base = float(nf.inverse(1.0 / k)) * float(nf.inverse(N))
    detail = {"ln_closed": ln_closed, "ln_bisect": ln_num,
              "omega_closed": om_closed, "omega_bisect": om_num,
              "closed_form_rel_err": max(abs(ln_num / ln_closed - 1), abs(om_num / om_closed - 1)),
              "C_implied": lhs / base, "C_cert": cert.C}
    return make_report("necessity", nf, n, f"k={k:03d}", lhs, cert.C * base,
                       f"spike S=[{-n}..{-n + k - 1}]", detail=detail)


# ---------------------------------------------------------------------------
# batch scan
# ---------------------------------------------------------------------------

def _norm_job(args):
    nf, n, case = args
    try:
        rule = TorusRule(case.poly)
        return all_norms(nf, case.poly, n, rule), _zygmund_modulars(nf, case.poly, n, rule)
    except (OrliczError, ArithmeticError, ValueError) as exc:
        return exc


def _run(jobs, fn, items):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(x) for x in items]


def _norm_results(nf_list, degrees, family, jobs):
    work = [(nf, n, case) for nf in nf_list for n in degrees for case in build_family(n, family)]
    out = _run(jobs, _norm_job, work)
    return work, out


def norm_table(nf_list, degrees, family=FamilySpec(), jobs=1):
    """``{phi label: {(n, case_id): NormTriple or exception}}``."""
    work, out = _norm_results(nf_list, degrees, family, jobs)
    table = {nf.label: {} for nf in nf_list}
    for (nf, n, case), res in zip(work, out):
        table[nf.label][(n, case.case_id)] = res if isinstance(res, Exception) else res[0]
    return table


def expand_checks(checks):
    names = []
    for c in checks:
        if c not in CHECK_GROUPS:
            raise ParameterError(f"unknown check {c!r}; known: {sorted(CHECK_GROUPS)}")
        names += CHECK_GROUPS[c]
    return names


@dataclass
class ScanResult:
    reports: list
    certificates: dict
    cphi: dict

    @property
    def hard_failures(self):
        return [r for r in self.reports if r.hard and r.status == "fail"]

    @property
    def errors(self):
        return [r for r in self.reports if r.status == "error"]

    @property
    def convergence_errors(self):
        return [r for r in self.errors if r.error.startswith(ConvergenceError.__name__)]


def scan(nf_list, degrees, family=FamilySpec(), checks=DEFAULT_CHECKS, seed=None, jobs=1,
         claimed_cphi=None):
    """Run the selected checks over every ``(phi, n, case)``.

    Norms are computed once per case and shared between checks.  Errors are
    recorded in the affected rows.  Reports are sorted by
    ``(check, phi, n, case_id)``.
    """
    if seed is not None:
        family = FamilySpec(family.kind, family.count, seed)
    names = expand_checks(checks)
    degrees = [int(n) for n in degrees]
    if not names or not degrees or not nf_list:
        return ScanResult([], {}, {})
    work, out = _norm_results(nf_list, degrees, family, jobs)
    certs, cphis, reports = {}, {}, []
    need_upper = "upper_2c2" in names
    need_lower = "lower_sampling" in names
    for nf in nf_list:
        if need_upper:
            certs[(nf.label, "super")] = multiplicativity_constant(nf, "super")
        if need_lower:
            certs[(nf.label, "sub")] = multiplicativity_constant(nf, "sub")
            if claimed_cphi is not None:
                cphis[nf.label] = float(claimed_cphi)
            else:
                ok = {(n, c.case_id): r[0] for (g, n, c), r in zip(work, out)
                      if g is nf and not isinstance(r, Exception)}
                if any(t.omega.value > 0 for t in ok.values()):
                    cphis[nf.label] = cphi_from_norms(
                        ok, f"{family.kind}:{family.count}:{family.seed}")
    for (nf, n, case), res in zip(work, out):
        reports += _case_reports(nf, n, case, res, names, certs, cphis, claimed_cphi is not None)
    reports.sort(key=lambda r: r.sort_key)
    return ScanResult(reports, certs, cphis)


def _case_reports(nf, n, case, res, names, certs, cphis, claimed):
    cid, wit = case.case_id, case.witness
    if isinstance(res, Exception):
        return [error_report(c, nf, n, cid, wit, res) for c in names]
    norms, modulars = res
    out = []
    if "simple" in names:
        out.append(verify_simple(nf, case.poly, n, cid, wit, norms))
    if "zygmund" in names:
        out.append(verify_modular_zygmund(nf, case.poly, n, cid, wit, modulars))
    if "upper_2c2" in names:
        out += verify_upper_sampling(nf, case.poly, n, certs[(nf.label, "super")], cid, wit, norms)
    if "lower_sampling" in names:
        out += verify_lower_sampling(nf, case.poly, n, certs[(nf.label, "sub")], cphis[nf.label],
                                     cid, wit, norms, claimed)
    return out


def reports_to_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(r.csv_row() for r in reports)
    return buf.getvalue()
