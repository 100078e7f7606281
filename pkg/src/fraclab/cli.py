"""Command-line front end: ``fraclab verify | sweep | eval``.

Exit codes: 0 all checks pass, 1 a check failed or crashed, 2 usage or
configuration error.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import logging
import math
import os
import re
import sys

import numpy as np

from . import config as cfgmod
from . import kernels, quadrature, spectral, verify
from .fields import Grid, ScalarField, TestFunctionSpec, VectorField, cutoff_eta, sample, write_field_csv

log = logging.getLogger("fraclab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUITES = ("all", "limits", "interpolation", "counterexample", "backends")
SWEEP_OPS = ("nabla-vs-riesz", "nabla-vs-grad", "energy", "laplacian-identity", "alpha-continuity", "tail-scaling")
EVAL_OPS = ("nabla", "div", "laplacian", "riesz", "potential", "dee", "tail-op")
HEADER = "check_id,param,value,aux1,aux2,verdict"

FIELD_ALIASES = {
    "odd-gaussian": ("gaussian_derivative", {"amplitude": -0.5}),  # x e^{-x^2}
}


class UsageError(Exception):
    pass


# -- field specs ---------------------------------------------------------------------


def parse_field_spec(text):
    """``name`` or ``name:key=val,key=val``; hyphens in the name map to underscores."""
    name, _, rest = text.partition(":")
    name = name.strip()
    if name in FIELD_ALIASES:
        family, params = FIELD_ALIASES[name]
        params = dict(params)
    else:
        family, params = name.replace("-", "_"), {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise UsageError(f"field parameter '{item}' is not key=value")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"field parameter '{item}' is not numeric") from None
    try:
        return TestFunctionSpec(family, params)
    except ValueError as e:
        raise UsageError(str(e)) from None


def parse_floats(text, what="list"):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} '{text}'") from None
    if not vals:
        raise UsageError(f"empty {what}")
    return vals


# -- report writing ------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return "%.17g" % v


def format_rows(rows):
    return [",".join(_fmt(v) for v in r) for r in rows]


def _safe(name):
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", name)


def write_report(outdir, units, suite):
    """One file per check under ``checks/`` plus ``report_<suite>.csv`` with the summary line."""
    os.makedirs(os.path.join(outdir, "checks"), exist_ok=True)
    lines = [HEADER]
    passed = 0
    for unit_id, results in units:
        unit_lines = [HEADER]
        for r in results:
            unit_lines += format_rows(r.csv_rows())
        with open(os.path.join(outdir, "checks", _safe(unit_id) + ".csv"), "w") as fh:
            fh.write("\n".join(unit_lines) + "\n")
        lines += unit_lines[1:]
        passed += all(r.passed for r in results) and bool(results)
    lines.append(f"SUITE,{passed}/{len(units)}")
    path = os.path.join(outdir, f"report_{suite}.csv")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path, passed, len(units)


class CrashResult:
    """Stand-in row for a check that raised."""

    passed = False

    def __init__(self, unit_id, exc):
        self.unit_id = unit_id
        self.message = f"{type(exc).__name__}: {exc}"

    def csv_rows(self):
        return [(self.unit_id + ".crash", math.nan, math.nan, math.nan, math.nan, "fail")]


# -- suites ------------------------------------------------------------------------------


def _as_list(x):
    return list(x) if isinstance(x, (list, tuple)) else [x]


def _spec(family, **params):
    return TestFunctionSpec(family, params)


def suite_backends(rc):
    tol = rc.tolerances
    a = rc.alpha_list("backends")
    jobs = [("constants", lambda: verify.constants_check(tol))]
    halving = {1: (12.0, (32, 64)), 2: (6.0, (24, 48))}
    for n in rc.dims:
        L, N = rc.grids[n]
        jobs.append((f"backends.agreement.n{n}", lambda n=n, L=L, N=N: verify.backend_agreement(n, L, N, a, 8, tol)))
        hL, sizes = halving[n]
        jobs.append((f"backends.halving.n{n}", lambda n=n, hL=hL, s=sizes: verify.halving_check(n, hL, s, a, 8, tol)))
    if 1 in rc.dims:
        L, N = rc.grids[1]
        jobs.append(("backends.riesz_sign", lambda L=L, N=N: verify.riesz_sign_check(L, N, rc.pad, tol)))
    for n in rc.dims:
        L, N = rc.grids[n]
        dN = N if n == 1 else min(N, 64)
        jobs.append((f"backends.duality.n{n}", lambda n=n, L=L, dN=dN: verify.duality_check(n, L, dN, a, tol)))
        jobs.append((f"semigroup.n{n}", lambda n=n, L=L, N=N: verify.semigroup_check(n, L, N, tol)))
    return jobs


def suite_limits(rc):
    tol, be = rc.tolerances, rc.backend
    g1 = rc.grid(1)
    gd = sample(_spec("gaussian_derivative"), g1)
    g = sample(_spec("gaussian"), g1)
    an = sample(_spec("annulus_spectrum"), g1)
    ind = sample(_spec("indicator_interval", a=0.0, b=1.0, smoothing=0.05), g1)
    az, a1, ae = rc.alpha_list("limit_zero"), rc.alpha_list("limit_one"), rc.alpha_list("energy")
    al, dl = rc.alpha_list("laplacian"), rc.alpha_list("continuity_deltas")
    jobs = [
        ("limit_zero.gd.p1", lambda: verify.sweep_limit_zero(gd, 1, az, be, tol)),
        ("limit_zero.g.p2", lambda: verify.sweep_limit_zero(g, 2, az, be, tol)),
        ("limit_one.g.p1", lambda: verify.sweep_limit_one(g, 1, a1, be, tol)),
        ("limit_one.g.p2", lambda: verify.sweep_limit_one(g, 2, a1, be, tol)),
    ]
    for n in rc.dims:
        unit = sample(_spec("gaussian", mass=1.0), rc.grid(n))
        jobs.append((f"energy.gaussian.n{n}", lambda unit=unit: verify.energy_limit(unit, ae, be, tol=tol)))
    windowed = gd.with_values(gd.values * cutoff_eta(1.0, g1).values, tag="gaussian_derivative*eta_1")
    jobs += [
        ("energy.gd", lambda: verify.energy_limit(gd, ae, be, tol=tol)),
        ("energy.indicator", lambda: verify.energy_limit(ind, ae, be, tolerance=tol.energy_rough, tol=tol)),
        ("energy_truncated.indicator", lambda: verify.energy_limit_truncated(ind, 2.0, ae, tol=tol)),
        ("energy_truncated.gd", lambda: verify.energy_limit_truncated(windowed, 2.0, ae, radius=1.0, tol=tol)),
        ("laplacian.gd.p1", lambda: verify.laplacian_identity_sweep(gd, 1, al, be, tol)),
        ("laplacian.gd.p2", lambda: verify.laplacian_identity_sweep(gd, 2, al, be, tol)),
        ("laplacian.annulus.p1", lambda: verify.laplacian_identity_sweep(an, 1, al, be, tol)),
        ("continuity.g.p2", lambda: verify.alpha_continuity_sweep(g, 2, 0.5, dl, be, tol)),
        ("continuity.gd.p1", lambda: verify.alpha_continuity_sweep(gd, 1, 0.3, dl, be, tol)),
        ("lsc.gd", lambda: verify.lower_semicontinuity_probe(gd, az, be, tol)),
        ("lsc.annulus", lambda: verify.lower_semicontinuity_probe(an, az, be, tol)),
        ("uniform_bound.p1", lambda: verify.uniform_bound_audit(g, 1.0, 0.5, 1, be, tol)),
        ("uniform_bound.p2", lambda: verify.uniform_bound_audit(g, 1.0, 0.1, 2, be, tol)),
        ("uniform_convergence.g", lambda: verify.uniform_convergence_sweep(g, rc.alpha_list("uniform_betas"), be, tol)),
    ]
    return jobs


def suite_interpolation(rc):
    tol, be = rc.tolerances, rc.backend
    g1 = rc.grid(1)
    g = sample(_spec("gaussian"), g1)
    gd = sample(_spec("gaussian_derivative"), g1)
    ind = sample(_spec("indicator_interval", a=0.0, b=1.0), Grid(1, 8.0, 1024))
    betas = rc.alpha_list("interp_betas")
    jobs = [
        ("ms_contrast", lambda: verify.ms_contrast_check(tol=tol)),
        ("h1bv.gd", lambda: verify.h1_bv_interpolation_audit(gd, 0.8, rc.alpha_list("h1bv_betas"), be, tol=tol)),
        ("interp.g0", lambda: verify.interpolation_audit(g, 2, 0.8, betas, 0.0, be, tol)),
        ("interp.g0.2", lambda: verify.interpolation_audit(g, 2, 0.8, [b for b in betas if b >= 0.2], 0.2, be, tol)),
        ("split.indicator", lambda: verify.splitting_inequality_audit(ind, 0.6, 0.3, [0.5, 1.0, 2.0], tol)),
        ("mihlin.n1", lambda: verify.mihlin_uniformity(1, 11, tol)),
        ("mihlin.n2", lambda: verify.mihlin_uniformity(2, 11, tol)),
    ]
    for b in rc.alpha_list("tail_betas"):
        jobs.append((f"tail_scaling.b{b:g}", lambda b=b: verify.tail_scaling_check(b, tol=tol)))
    for p in (1, 2):
        for a in rc.alpha_list("dee"):
            jobs.append((f"dee.a{a:g}.p{p}", lambda a=a, p=p: verify.dee_bound_check(g, a, p, tol)))
    return jobs


def suite_counterexample(rc):
    if 2 not in rc.dims:
        raise cfgmod.ConfigError("the counterexample suite needs a two-dimensional grid (add 2 to [grid] dims)")
    tol = rc.tolerances
    return [(f"besov.a{a:g}", lambda a=a: verify.besov_strict_inclusion_demo(a, tol=tol))
            for a in rc.alpha_list("besov")]


SUITE_BUILDERS = {
    "backends": suite_backends,
    "limits": suite_limits,
    "interpolation": suite_interpolation,
    "counterexample": suite_counterexample,
}


def build_jobs(suite, rc):
    names = ["backends", "limits", "interpolation", "counterexample"] if suite == "all" else [suite]
    jobs = []
    for name in names:
        jobs += SUITE_BUILDERS[name](rc)
    return jobs


def _run_job(job):
    unit_id, fn = job
    try:
        return unit_id, _as_list(fn())
    except Exception as exc:  # a crashing check is a failed check, not a crashed run
        log.error("check %s crashed: %s: %s", unit_id, type(exc).__name__, exc)
        return unit_id, [CrashResult(unit_id, exc)]


def run_jobs(jobs, workers=1):
    """Run checks, possibly concurrently; results come back in job order."""
    if workers <= 1:
        return [_run_job(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs))


# -- commands ----------------------------------------------------------------------------


def cmd_verify(args):
    rc = cfgmod.load(args.config)
    jobs = build_jobs(args.suite, rc)
    outdir = args.out or rc.output_dir
    units = run_jobs(jobs, kernels.thread_count())
    path, passed, total = write_report(outdir, units, args.suite)
    for unit_id, results in units:
        print(f"{'PASS' if all(r.passed for r in results) else 'FAIL'} {unit_id}")
    print(f"SUITE {args.suite} {passed}/{total} -> {path}")
    return EXIT_OK if passed == total else EXIT_FAIL


def _grid_from_args(args, rc):
    n = args.n
    L, N = rc.grids.get(n, (None, None)) if n in rc.grids else (None, None)
    L = args.L if args.L is not None else L
    N = args.N if args.N is not None else N
    if L is None or N is None:
        raise UsageError(f"no grid configured for n={n}; pass --L and --N")
    return Grid(n, L, N)


def _out_stem(path, default):
    stem = path or default
    for ext in (".csv", ".dat"):
        if stem.endswith(ext):
            stem = stem[: -len(ext)]
    d = os.path.dirname(stem)
    if d:
        os.makedirs(d, exist_ok=True)
    return stem


def _in_sweep_order(rows, params):
    """Report rows reordered to follow the command-line list, so the last line is the limit end."""
    by_param = {r[0]: r for r in rows}
    ordered = [by_param[p] for p in dict.fromkeys(params) if p in by_param]
    return ordered if len(ordered) == len(rows) else list(rows)


def cmd_sweep(args):
    rc = cfgmod.load(args.config)
    alphas = parse_floats(args.alphas, "alpha list")
    spec = parse_field_spec(args.field)
    grid = _grid_from_args(args, rc)
    f = sample(spec, grid)
    tol, be, op = rc.tolerances, args.backend or rc.backend, args.op
    if op == "nabla-vs-riesz":
        rep = verify.sweep_limit_zero(f, args.p, alphas, be, tol)
    elif op == "nabla-vs-grad":
        rep = verify.sweep_limit_one(f, args.p, alphas, be, tol)
    elif op == "energy":
        # rescaled to unit mass so the limit is the bare constant n omega_n mu_{n,0}
        mass = f.integral()
        g = f if verify._is_zero_mean(f) else f.with_values(f.values / abs(mass), tag=f.tag)
        rep = verify.energy_limit(g, alphas, be, tol=tol)
    elif op == "laplacian-identity":
        rep = verify.laplacian_identity_sweep(f, args.p, alphas, be, tol)
    elif op == "alpha-continuity":
        rep = verify.alpha_continuity_sweep(f, args.p, args.alpha0, alphas, be, tol)
    else:  # tail-scaling: the list holds a single beta
        if len(alphas) != 1:
            raise UsageError("tail-scaling takes exactly one beta in --alphas")
        rep = verify.tail_scaling_check(alphas[0], tol=tol)
    stem = _out_stem(args.out, os.path.join(rc.output_dir, f"sweep_{op}"))
    with open(stem + ".csv", "w") as fh:
        fh.write("\n".join([HEADER] + format_rows(rep.csv_rows())) + "\n")
    with open(stem + ".dat", "w") as fh:
        fh.write(f"# {rep.check_id}: param value\n")
        fh.write("".join(f"{_fmt(r[0])} {_fmt(r[1])}\n" for r in _in_sweep_order(rep.rows, alphas)))
    print(f"{'PASS' if rep.verdict else 'FAIL'} {rep.check_id} slope={rep.fitted_slope:.6g} "
          f"limit={rep.limit_estimate:.6g} -> {stem}.csv")
    return EXIT_OK if rep.verdict else EXIT_FAIL


def cmd_eval(args):
    rc = cfgmod.load(args.config)
    spec = parse_field_spec(args.field)
    grid = _grid_from_args(args, rc)
    f = sample(spec, grid)
    be, op, a = args.backend or rc.backend, args.op, args.alpha
    quad = be == "quadrature"
    if op in ("nabla", "div", "laplacian", "dee", "tail-op") and a is None:
        raise UsageError(f"eval {op} needs --alpha")
    if op == "nabla":
        out = quadrature.quad_nabla(f, a) if quad else spectral.spectral_nabla(f, a, pad=rc.pad)
    elif op == "div":
        zero = ScalarField(grid, np.zeros(grid.shape))
        phi = VectorField(grid, (f,) + (zero,) * (grid.n - 1))
        out = quadrature.quad_div(phi, a) if quad else spectral.spectral_div(phi, a, pad=rc.pad)
    elif op == "laplacian":
        out = quadrature.quad_frac_laplacian(f, a) if quad else spectral.spectral_frac_laplacian(f, a, rc.pad)
    elif op == "riesz":
        out = quadrature.quad_riesz(f) if quad else spectral.spectral_riesz(f, pad=rc.pad)
    elif op == "potential":
        if a is None or not 0.0 < a < grid.n:
            raise UsageError(f"potential order must lie in (0, {grid.n}), got {a}")
        out = quadrature.quad_riesz_potential(f, a) if quad else spectral.spectral_riesz_potential(f, a, rc.pad)
    elif op == "dee":
        out = quadrature.quad_dee_alpha(f, a)
    else:
        if args.R is None:
            raise UsageError("eval tail-op needs --R")
        out = quadrature.quad_tail_op(f, a, args.R)
    path = args.out or os.path.join(rc.output_dir, f"eval_{op}.csv")
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    write_field_csv(out, path)
    first = out[0] if isinstance(out, VectorField) else out
    print(f"{op} center={first.center_value():.12g} max={float(np.max(np.abs(first.values))):.6g} -> {path}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="fraclab", description="Fractional operators: evaluation and verification.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--config", help="INI run configuration (default: packaged)")
    v.add_argument("--out", help="report directory (default: [output] dir)")
    v.set_defaults(func=cmd_verify)

    def grid_opts(p):
        p.add_argument("--config")
        p.add_argument("--field", default="gaussian", help="family[:key=val,...]")
        p.add_argument("--backend", choices=verify.BACKENDS)
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--L", type=float)
        p.add_argument("--N", type=int)
        p.add_argument("--out")

    s = sub.add_parser("sweep", help="one convergence sweep, written as CSV and .dat")
    s.add_argument("op", choices=SWEEP_OPS)
    s.add_argument("--alphas", default="0.4,0.2,0.1,0.05,0.02")
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--alpha0", type=float, default=0.5, help="base order for alpha-continuity")
    grid_opts(s)
    s.set_defaults(func=cmd_sweep)

    e = sub.add_parser("eval", help="evaluate one operator and write the field")
    e.add_argument("op", choices=EVAL_OPS)
    e.add_argument("--alpha", type=float)
    e.add_argument("--R", type=float, help="cut-off radius for tail-op")
    grid_opts(e)
    e.set_defaults(func=cmd_eval)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if getattr(args, "p", None) is not None and args.p in (1.0, 2.0):
            args.p = int(args.p)
        return args.func(args)
    except (UsageError, cfgmod.ConfigError, ValueError) as e:
        print(f"fraclab: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
