"""Command-line driver.

Exit codes: 0 all hard checks pass, 1 an inequality is violated, 2 usage or
configuration error, 3 numerical non-convergence.
"""

import argparse
import csv
import io
import re
import sys
from pathlib import Path

import numpy as np

from . import sampling
from .errors import ConfigError, ConvergenceError, OrliczError
from .config import RunConfig
from .hilbert import dirichlet_norm, dirichlet_table, verify_lambda_monotonicity
from .nfunction import (ConditionParams, check_big_condition, check_small_condition,
                        delta2_constant, matuszewska_indices, prescan_condition_params)
from .norms import all_norms
from .samplingfn import interpolating_bound, sampling_function
from .trigpoly import load as load_poly

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONV = 0, 1, 2, 3


def _f(x):
    return f"{x:.17g}"


def _slug(label):
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_")


def _write_rows(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _write(path, buf.getvalue())


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_norm(cfg, args, out):
    if not args.poly:
        raise ConfigError("norm needs --poly FILE")
    try:
        f = load_poly(args.poly)
    except OSError as exc:
        raise ConfigError(f"cannot read polynomial: {exc}") from None
    rows = []
    for nf in cfg.phis():
        t = all_norms(nf, f)
        for r in (t.continuous, t.ln, t.omega):
            rows.append([nf.label] + r.csv_row())
    _write_rows(out / "norms.csv", ("phi", "norm_kind", "value", "residual", "points", "converged"),
                rows)
    for row in rows:
        print(",".join(row))
    return EXIT_OK


def _scan(cfg, args, out, name):
    if "tol_rel" in cfg.tolerances:
        sampling.TOL_REL = float(cfg.tolerances["tol_rel"])
    res = sampling.scan(cfg.phis(), cfg.degrees, cfg.family_spec(args.seed), cfg.checks,
                        jobs=args.jobs, claimed_cphi=cfg.claimed_cphi)
    _write(out / f"{name}.csv", sampling.reports_to_csv(res.reports))
    if res.certificates:
        rows = [[label, mode, _f(c.C), _f(c.witness[0]), _f(c.witness[1]), _f(c.required),
                 str(c.grid["pairs"])] for (label, mode), c in sorted(res.certificates.items())]
        _write_rows(out / "certificates.csv",
                    ("phi", "mode", "C", "witness_a", "witness_b", "required", "pairs"), rows)
    if res.cphi:
        rows = []
        for label, c in sorted(res.cphi.items()):
            if isinstance(c, float):
                rows.append([label, "claimed", _f(c), "", ""])
            else:
                rows += [[label, "estimated", _f(c.value), str(n), _f(v)]
                         for n, v in c.per_degree.items()]
        _write_rows(out / "cphi.csv", ("phi", "source", "cphi", "n", "per_degree_sup"), rows)
    hard = [r for r in res.reports if r.hard]
    print(f"{name}: {len(res.reports)} rows, {len(hard)} hard, "
          f"{len(res.hard_failures)} hard failures, {len(res.errors)} errors")
    for r in res.hard_failures[:20]:
        print(f"FAIL {r.check} {r.phi} n={r.n} {r.case_id} ratio={_f(r.ratio)}")
    if res.convergence_errors:
        return EXIT_NONCONV
    if res.hard_failures or res.errors:
        return EXIT_FAIL
    return EXIT_OK


def cmd_scan(cfg, args, out):
    return _scan(cfg, args, out, "scan")


def cmd_verify(cfg, args, out):
    return _scan(cfg, args, out, "verify")


def cmd_indices(cfg, args, out):
    rows = []
    for nf in cfg.phis():
        ix = matuszewska_indices(nf)
        d2 = delta2_constant(nf)
        rows.append([nf.label, _f(ix.alpha), _f(ix.beta), _f(ix.residual_alpha),
                     _f(ix.residual_beta), _f(d2.value), "true" if d2.non_delta2 else "false"])
    _write_rows(out / "indices.csv", ("phi", "alpha", "beta", "residual_alpha", "residual_beta",
                                      "delta2", "non_delta2"), rows)
    for row in rows:
        print(",".join(row))
    return EXIT_OK


def cmd_conditions(cfg, args, out):
    rows, ok = [], True
    for nf in cfg.phis():
        cp = cfg.condition_params
        params = ConditionParams(**cp) if cp else prescan_condition_params(nf)
        for rep in (check_small_condition(nf, params.sigma),
                    check_big_condition(nf, params.gamma, params.p)):
            ok &= rep.holds
            rows.append([nf.label, rep.kind, _f(params.sigma), _f(params.gamma), _f(params.p),
                         _f(rep.sup_ratio), _f(rep.argsup), "true" if rep.holds else "false"])
    _write_rows(out / "conditions.csv",
                ("phi", "kind", "sigma", "gamma", "p", "sup_ratio", "argsup", "holds"), rows)
    for row in rows:
        print(",".join(row))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dirichlet(cfg, args, out):
    ok = True
    degrees = sorted(set(cfg.degrees))
    for nf in cfg.phis():
        tab = dirichlet_table(nf, degrees)
        _write(out / f"dirichlet_{_slug(nf.label)}.csv", tab.to_csv())
        lam = [dirichlet_norm(nf, n) for n in range(max(degrees) + 1)] if degrees else []
        mono = verify_lambda_monotonicity(nf, max(degrees), lam) if degrees else None
        lemma_ok = bool(np.all(tab.lower <= tab.middle * (1 + sampling.TOL_REL))
                        and np.all(tab.middle <= tab.upper_4pi * (1 + sampling.TOL_REL)))
        ok &= lemma_ok and (mono is None or mono.passed)
        print(f"{nf.label}: lemma {'ok' if lemma_ok else 'FAIL'}, "
              f"monotonicity {'ok' if mono is None or mono.passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sampling_fn(cfg, args, out):
    g = cfg.t_grid
    t = np.logspace(np.log10(g["min"]), np.log10(g["max"]), g["points"])
    for nf in cfg.phis():
        for kind, fn in (("sampling", sampling_function), ("interpolating", interpolating_bound)):
            tab = fn(nf, t)
            _write(out / f"samplingfn_{kind}_{_slug(nf.label)}.csv", tab.to_csv())
            note = "" if tab.canonical else " (candidate, not unique)"
            print(f"{nf.label} {kind}: {len(tab.vertices)} hull points{note}, "
                  f"all stabilized={bool(tab.stabilized.all())}")
    return EXIT_OK


COMMANDS = {
    "norm": cmd_norm,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "indices": cmd_indices,
    "conditions": cmd_conditions,
    "dirichlet": cmd_dirichlet,
    "sampling-fn": cmd_sampling_fn,
}


def build_parser():
    p = argparse.ArgumentParser(prog="orlicz-sampling",
                                description="Orlicz-norm sampling inequalities on the torus.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("--seed", type=int, help="family seed (overrides the config)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--poly", help="polynomial file for the norm command")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = RunConfig.load(args.config)
        out = Path(args.out or cfg.output_dir)
        return COMMANDS[args.command](cfg, args, out)
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except (ConfigError, OrliczError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
