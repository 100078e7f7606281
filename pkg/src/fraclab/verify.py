"""Numerical checks of the limits, inequalities and counterexample.

Each check returns a :class:`ConvergenceReport` (a parameter sweep) or one
or more :class:`CheckResult` (an inequality evaluated once).  Verdicts depend
only on the measured rows and the frozen :class:`Tolerances`.
"""

from dataclasses import dataclass, field, fields, replace
import math

import numpy as np

from . import constants, quadrature, spectral
from .fields import Grid, ScalarField, TestFunctionSpec, VectorField, besov_counterexample, sample
from .norms import (
    besov_sup_seminorm,
    far_field_factor,
    frac_variation,
    gagliardo_seminorm,
    hardy_norm,
    holder_seminorm,
    lp_norm,
)

BACKENDS = ("spectral", "quadrature")


@dataclass(frozen=True)
class Tolerances:
    jitter: float = 0.05
    limit_zero: float = 0.05
    limit_one: float = 0.02
    energy: float = 0.05
    energy_rough: float = 0.07
    interp_ratio: float = 10.0
    interp_flat: float = 2.0
    gagliardo_slope: float = 0.15
    ms_limit: float = 0.05
    split_constant_factor: float = 2.0
    laplacian: float = 0.03
    continuity: float = 0.01
    lsc_slack: float = 0.02
    besov_stable: float = 0.10
    lq_growth: float = 0.20
    tail_slope: float = 0.05
    backend: float = 1e-2
    halving: float = 1.5
    riesz_center: float = 1e-3
    duality: float = 1e-3
    semigroup_spectral: float = 1e-8
    semigroup_quadrature: float = 3e-2
    mihlin_spread: float = 2.0
    mihlin_refine: float = 0.05
    constants: float = 1e-12
    mu_one: float = 0.01

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise ValueError(f"tolerance '{f.name}' must be a positive number, got {v!r}")

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]


TOLERANCES = Tolerances()


@dataclass(frozen=True)
class ConvergenceReport:
    check_id: str
    rows: tuple  # (param, value, aux1, aux2)
    fitted_slope: float
    limit_estimate: float
    verdict: bool
    tolerance: float

    def __post_init__(self):
        rows = tuple(sorted((tuple(float(v) for v in r) + (math.nan,) * (4 - len(r)) for r in self.rows),
                            key=lambda r: r[0]))
        object.__setattr__(self, "rows", rows)

    @property
    def passed(self):
        return self.verdict

    def csv_rows(self):
        v = _verdict_word(self.verdict)
        return [(self.check_id,) + r + (v,) for r in self.rows]


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    lhs: float
    rhs: float
    verdict: bool
    anchor: str = ""
    param: float = math.nan
    extras: tuple = field(default=())  # (name, value) diagnostics

    @property
    def ratio(self):
        return _ratio(self.lhs, self.rhs)

    @property
    def passed(self):
        return self.verdict

    def csv_rows(self):
        v = _verdict_word(self.verdict)
        out = [(self.check_id, self.param, self.lhs, self.rhs, self.ratio, v)]
        for name, val in self.extras:
            out.append((f"{self.check_id}.{name}", self.param, float(val), math.nan, math.nan, v))
        return out


def _verdict_word(ok):
    return "pass" if ok else "fail"


def _ratio(lhs, rhs):
    if rhs == 0:
        return 1.0 if lhs == 0 else math.inf
    return lhs / rhs


def fit_slope(x, y):
    """Least-squares slope of log y against log x over the positive entries."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    ok = (x > 0) & (y > 0)
    if ok.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0])


def monotone_within(values, jitter):
    """True if each value is at most (1 + jitter) times its predecessor."""
    return all(b <= a * (1.0 + jitter) for a, b in zip(values, values[1:]))


# -- operator dispatch -------------------------------------------------------------


def _check_backend(backend):
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend '{backend}' (expected one of {BACKENDS})")


def nabla(f, alpha, backend="spectral", pad=spectral.DEFAULT_PAD):
    _check_backend(backend)
    if backend == "quadrature" and 0.0 < alpha < 1.0:
        return quadrature.quad_nabla(f, alpha)
    if backend == "quadrature" and alpha == 0.0:
        return quadrature.quad_riesz(f)
    return spectral.spectral_nabla(f, alpha, pad=pad)


def riesz(f, backend="spectral", pad=spectral.DEFAULT_PAD):
    _check_backend(backend)
    if backend == "quadrature":
        return quadrature.quad_riesz(f)
    return spectral.spectral_riesz(f, pad=pad)


def frac_laplacian(f, alpha, backend="spectral", pad=spectral.DEFAULT_PAD):
    _check_backend(backend)
    if backend == "quadrature":
        return quadrature.quad_frac_laplacian(f, alpha)
    return spectral.spectral_frac_laplacian(f, alpha, pad=pad)


def _is_zero_mean(f, rtol=1e-8):
    l1 = lp_norm(f, 1)
    return abs(f.integral()) <= rtol * l1


def _zero(f):
    return not np.any(f.values)


# -- sweeps ------------------------------------------------------------------------


def sweep_limit_zero(f: ScalarField, p, alphas, backend="spectral", tol=TOLERANCES) -> ConvergenceReport:
    """||nabla^alpha f - Rf||_p as alpha decreases to 0."""
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    if p == 1 and not _is_zero_mean(f):
        raise ValueError(
            "L^1 convergence to the Riesz transform needs a zero-mean field in the Hardy space; "
            f"'{f.tag}' has integral {f.integral():.3e}"
        )
    alphas = list(alphas)
    if not alphas:
        raise ValueError("empty alpha list")
    rf = riesz(f, backend)
    ref = lp_norm(rf, p)
    errs = [lp_norm(nabla(f, a, backend) - rf, p) for a in alphas]
    order = np.argsort(alphas)[::-1]
    desc = [errs[i] for i in order]
    final = desc[-1]
    ok = monotone_within(desc, tol.jitter) and final <= tol.limit_zero * ref
    rows = [(a, e, ref) for a, e in zip(alphas, errs)]
    return ConvergenceReport(f"limit_zero.p{p}.{f.tag}", rows, fit_slope(alphas, errs), final, ok, tol.limit_zero)


def sweep_limit_one(f: ScalarField, p, alphas, backend="spectral", tol=TOLERANCES) -> ConvergenceReport:
    """||nabla^alpha f - grad f||_p as alpha increases to 1 (gradient taken spectrally)."""
    alphas = list(alphas)
    if not alphas:
        raise ValueError("empty alpha list")
    grad = spectral.spectral_gradient(f)
    ref = lp_norm(grad, p)
    errs = [lp_norm(nabla(f, a, backend) - grad, p) for a in alphas]
    final = errs[int(np.argmax(alphas))]
    ok = final <= tol.limit_one * ref
    rows = [(a, e, ref) for a, e in zip(alphas, errs)]
    slope = fit_slope([1.0 - a for a in alphas], errs)
    return ConvergenceReport(f"limit_one.p{p}.{f.tag}", rows, slope, final, ok, tol.limit_one)


def energy_target(f):
    n = f.grid.n
    return constants.ConstantsTable.for_dim(n).energy_limit_factor * abs(f.integral())


def energy_limit(f: ScalarField, alphas, backend="spectral", tolerance=None, tol=TOLERANCES) -> ConvergenceReport:
    """alpha ||nabla^alpha f||_1 (box plus far-field tail) as alpha decreases to 0.

    The limit is n omega_n mu_{n,0} |int f|.  For zero-mean fields the target
    is 0 and the last row must fall below ``tolerance`` times ||Rf||_1.
    """
    tolerance = tol.energy if tolerance is None else tolerance
    alphas = list(alphas)
    if not alphas:
        raise ValueError("empty alpha list")
    vals = [a * frac_variation(f, a, backend=backend, far_field=True) for a in alphas]
    limit = vals[int(np.argmin(alphas))]
    target = energy_target(f)
    if _is_zero_mean(f):
        scale = lp_norm(riesz(f, backend), 1)
        ok = limit <= tolerance * scale
    else:
        ok = abs(limit - target) <= tolerance * target
    rows = [(a, v, target) for a, v in zip(alphas, vals)]
    return ConvergenceReport(f"energy.n{f.grid.n}.{f.tag}", rows, fit_slope(alphas, vals), limit, ok, tolerance)


def support_radius(f, rtol=1e-12):
    """Radius of the smallest centred ball holding every node with |f| > rtol max|f|."""
    big = np.abs(f.values) > rtol * np.max(np.abs(f.values)) if np.any(f.values) else np.zeros(f.grid.shape, bool)
    if not big.any():
        return 0.0
    return float(np.max(f.grid.radius()[big]))


def energy_limit_truncated(f: ScalarField, eps, alphas, radius=None, tolerance=None, tol=TOLERANCES) -> ConvergenceReport:
    """alpha mu_{n,alpha} || int_{|y|>eps} y f(x+y)/|y|^{n+alpha+1} dy ||_1 as alpha decreases to 0."""
    tolerance = tol.energy if tolerance is None else tolerance
    R = support_radius(f) if radius is None else radius
    if not eps > R:
        raise ValueError(f"the truncation radius eps={eps} must exceed the support radius {R:.4g}")
    alphas = list(alphas)
    if not alphas:
        raise ValueError("empty alpha list")
    mass = abs(f.integral())
    vals = []
    for a in alphas:
        inside = lp_norm(quadrature.quad_far_op(f, a, eps), 1)
        outside = constants.mu(f.grid.n, a) * mass * far_field_factor(f.grid.n, f.grid.L, a)
        vals.append(a * (inside + outside))
    limit = vals[int(np.argmin(alphas))]
    target = energy_target(f)
    if _is_zero_mean(f):
        ok = limit <= tolerance * max(lp_norm(f, 1), 1e-300)
    else:
        ok = abs(limit - target) <= tolerance * target
    rows = [(a, v, target) for a, v in zip(alphas, vals)]
    return ConvergenceReport(f"energy_truncated.eps{eps:g}.{f.tag}", rows, fit_slope(alphas, vals), limit, ok, tolerance)


def laplacian_identity_sweep(f: ScalarField, p, alphas, backend="spectral", tol=TOLERANCES) -> ConvergenceReport:
    """||(-Delta)^{alpha/2} f - f||_p as alpha decreases to 0, for zero-mean f."""
    if not _is_zero_mean(f):
        raise ValueError(
            f"the identity limit needs a field with vanishing integral; '{f.tag}' has {f.integral():.3e}"
        )
    alphas = list(alphas)
    if not alphas:
        raise ValueError("empty alpha list")
    ref = lp_norm(f, p)
    errs = [lp_norm(frac_laplacian(f, a, backend) - f, p) for a in alphas]
    order = np.argsort(alphas)[::-1]
    desc = [errs[i] for i in order]
    final = desc[-1]
    ok = monotone_within(desc, tol.jitter) and final <= tol.laplacian * ref
    rows = [(a, e, ref) for a, e in zip(alphas, errs)]
    return ConvergenceReport(f"laplacian_identity.p{p}.{f.tag}", rows, fit_slope(alphas, errs), final, ok, tol.laplacian)


def alpha_continuity_sweep(f: ScalarField, p, alpha0, deltas, backend="spectral", tol=TOLERANCES) -> ConvergenceReport:
    """||nabla^{alpha0+delta} f - nabla^{alpha0} f||_p as delta decreases to 0."""
    if not 0.0 < alpha0 < 1.0:
        raise ValueError(f"alpha0 must lie in (0, 1), got {alpha0}")
    deltas = list(deltas)
    if not deltas:
        raise ValueError("empty delta list")
    for d in deltas:
        if not 0.0 <= alpha0 + d <= 1.0:
            raise ValueError(f"alpha0 + delta = {alpha0 + d} leaves [0, 1]")
    base = nabla(f, alpha0, backend)
    ref = lp_norm(base, p)
    errs = [0.0 if d == 0 else lp_norm(nabla(f, alpha0 + d, backend) - base, p) for d in deltas]
    order = np.argsort(np.abs(deltas))[::-1]
    desc = [errs[i] for i in order]
    final = desc[-1]
    ok = monotone_within(desc, tol.jitter) and final <= tol.continuity * ref
    rows = [(d, e, ref) for d, e in zip(deltas, errs)]
    return ConvergenceReport(f"alpha_continuity.a{alpha0:g}.p{p}.{f.tag}", rows,
                             fit_slope(np.abs(deltas), errs), final, ok, tol.continuity)


def uniform_convergence_sweep(f: ScalarField, betas, backend="spectral", tol=TOLERANCES) -> ConvergenceReport:
    """||nabla^beta f - nabla^0 f||_inf as beta decreases to 0."""
    betas = list(betas)
    if not betas:
        raise ValueError("empty beta list")
    rf = riesz(f, backend)
    ref = lp_norm(rf, math.inf)
    errs = [lp_norm(nabla(f, b, backend) - rf, math.inf) for b in betas]
    order = np.argsort(betas)[::-1]
    desc = [errs[i] for i in order]
    final = desc[-1]
    ok = monotone_within(desc, tol.jitter) and final <= tol.limit_zero * ref
    rows = [(b, e, ref) for b, e in zip(betas, errs)]
    return ConvergenceReport(f"uniform_convergence.{f.tag}", rows, fit_slope(betas, errs), final, ok, tol.limit_zero)


# -- inequality audits ---------------------------------------------------------------


def _interp_norm(f, s, p, backend, cache):
    if s not in cache:
        cache[s] = lp_norm(f, p) if s == 0 else lp_norm(nabla(f, s, backend), p)
    return cache[s]


def interpolation_audit(f: ScalarField, p, alpha, betas, gamma=0.0, backend="spectral", tol=TOLERANCES):
    """||nabla^beta f||_p against ||nabla^gamma f||_p^{(a-b)/(a-g)} ||nabla^alpha f||_p^{(b-g)/(a-g)}.

    The gamma = 0 end uses ||f||_p.  Returns one CheckResult per beta and a
    flatness result comparing the smallest beta with the middle of the grid.
    """
    betas = list(betas)
    if not betas:
        raise ValueError("empty beta list")
    for b in betas:
        if not 0.0 <= gamma <= b <= alpha <= 1.0:
            raise ValueError(f"need 0 <= gamma <= beta <= alpha <= 1 (gamma={gamma}, beta={b}, alpha={alpha})")
    if gamma == alpha:
        raise ValueError("gamma must be smaller than alpha")
    cache = {}
    top = _interp_norm(f, alpha, p, backend, cache)
    low = _interp_norm(f, gamma, p, backend, cache)
    out = []
    ratios = []
    for b in betas:
        lhs = _interp_norm(f, b, p, backend, cache)
        rhs = low ** ((alpha - b) / (alpha - gamma)) * top ** ((b - gamma) / (alpha - gamma))
        r = _ratio(lhs, rhs)
        ratios.append(r)
        out.append(CheckResult(f"interp.a{alpha:g}.g{gamma:g}.p{p:g}", lhs, rhs, r <= tol.interp_ratio,
                               "L^p interpolation between gamma and alpha", param=b))
    srt = sorted(zip(betas, ratios))
    small, mid = srt[0][1], srt[len(srt) // 2][1]
    flat = _ratio(small, mid)
    out.append(CheckResult(f"interp.a{alpha:g}.g{gamma:g}.p{p:g}.flatness", small, mid,
                           1.0 / tol.interp_flat <= flat <= tol.interp_flat,
                           "no blow-up as beta decreases", param=srt[0][0]))
    return out


def h1_bv_interpolation_audit(f: ScalarField, alpha, betas, backend="spectral", slope_betas=None, tol=TOLERANCES):
    """Uniform-in-beta H^1/BV^alpha interpolation, contrasted with the 1/beta Gagliardo blow-up."""
    if not _is_zero_mean(f):
        raise ValueError(f"the Hardy-space branch needs a zero-mean field; '{f.tag}' has {f.integral():.3e}")
    betas = list(betas)
    if not betas:
        raise ValueError("empty beta list")
    for b in betas:
        if not 0.0 < b <= alpha < 1.0:
            raise ValueError(f"need 0 < beta <= alpha < 1, got beta={b}, alpha={alpha}")
    hn = hardy_norm(f, backend, diagnose=False).value
    top = lp_norm(nabla(f, alpha, backend), 1)
    out = []
    for b in betas:
        lhs = lp_norm(nabla(f, b, backend), 1) if b != alpha else top
        rhs = hn ** ((alpha - b) / alpha) * top ** (b / alpha)
        out.append(CheckResult(f"h1bv.a{alpha:g}", lhs, rhs, _ratio(lhs, rhs) <= tol.interp_ratio,
                               "H^1 / BV^alpha interpolation", param=b))
    sb = sorted(slope_betas if slope_betas is not None else [b for b in betas if b <= 0.2])
    if len(sb) >= 2:
        gag = [gagliardo_seminorm(f, b, 1) for b in sb]
        slope = fit_slope(sb, gag)
        scaled = [b * g for b, g in zip(sb, gag)]
        spread = max(scaled) / min(scaled)
        ok = abs(slope + 1.0) <= tol.gagliardo_slope and spread <= tol.interp_flat
        out.append(CheckResult("h1bv.gagliardo_slope", slope, -1.0, ok, "W^{beta,1} seminorm grows like 1/beta",
                               param=sb[0], extras=(("beta_times_seminorm_spread", spread),)))
    return out


def splitting_inequality_audit(f: ScalarField, alpha, beta, R_list, tol=TOLERANCES):
    """[f]_{beta,1} <= R^{alpha-beta} [f]_{alpha,1} + c R^{-beta}/beta ||f||_1 with c = 2 n omega_n.

    Also reports the smallest c making every R feasible.
    """
    if not 0.0 < beta < alpha < 1.0:
        raise ValueError(f"need 0 < beta < alpha < 1, got beta={beta}, alpha={alpha}")
    n = f.grid.n
    c = tol.split_constant_factor * n * constants.omega(n)
    gb = gagliardo_seminorm(f, beta, 1)
    ga = gagliardo_seminorm(f, alpha, 1)
    l1 = lp_norm(f, 1)
    out = []
    cmin = 0.0
    for R in R_list:
        main = R ** (alpha - beta) * ga
        tail = R ** (-beta) / beta * l1
        rhs = main + c * tail
        out.append(CheckResult(f"split.a{alpha:g}.b{beta:g}", gb, rhs, gb <= rhs * (1 + 1e-12),
                               "seminorm splitting at radius R", param=R))
        if tail > 0:
            cmin = max(cmin, (gb - main) / tail)
    out.append(CheckResult(f"split.a{alpha:g}.b{beta:g}.c_min", cmin, c, cmin <= c, "smallest feasible constant"))
    return out


def uniform_bound_rhs(f, alpha, beta, p):
    n = f.grid.n
    if alpha >= 1.0:
        hold = holder_seminorm(f, 1.0)
    else:
        hold = holder_seminorm(f, alpha)
    lp = lp_norm(f, p)
    c = constants.uniform_bound_const(n, p) * constants.mu(n, beta)
    e = alpha * p + n
    return (c * e / ((alpha - beta) * (beta * p + n)) * (n / p + beta) ** ((alpha - beta) / e)
            * lp ** (p * (alpha - beta) / e) * hold ** ((beta * p + n) / e))


def uniform_bound_audit(f: ScalarField, alpha, beta, p, backend="spectral", tol=TOLERANCES) -> CheckResult:
    """sup |nabla^beta f| against the explicit Holder / L^p bound."""
    if not 0.0 <= beta < alpha <= 1.0:
        raise ValueError(f"need 0 <= beta < alpha <= 1, got beta={beta}, alpha={alpha}")
    lhs = lp_norm(nabla(f, beta, backend), math.inf)
    rhs = uniform_bound_rhs(f, alpha, beta, p)
    return CheckResult(f"uniform_bound.a{alpha:g}.p{p:g}", lhs, rhs, lhs <= rhs * (1 + 1e-12),
                       "sup norm of nabla^beta f by Holder and L^p norms", param=beta)


def lower_semicontinuity_probe(f: ScalarField, alphas, backend="spectral", tol=TOLERANCES) -> CheckResult:
    """||Rf||_1 <= min over alphas of ||nabla^alpha f||_1, up to the slack."""
    alphas = list(alphas)
    if not alphas:
        raise ValueError("empty alpha list")
    lhs = lp_norm(riesz(f, backend), 1)
    rhs = min(lp_norm(nabla(f, a, backend), 1) for a in alphas)
    return CheckResult(f"lsc.{f.tag}", lhs, rhs, lhs <= rhs + tol.lsc_slack * lhs,
                       "variation at alpha = 0 below the liminf")


def ms_contrast_check(alpha=0.02, L=8.0, N=1024, tol=TOLERANCES) -> CheckResult:
    """alpha [1_{[0,1]}]_{W^{alpha,1}} against the closed form 4 / (1 - alpha)."""
    g = Grid(1, L, N)
    ind = sample(TestFunctionSpec("indicator_interval", {"a": 0.0, "b": 1.0}), g)
    lhs = alpha * gagliardo_seminorm(ind, alpha, 1)
    rhs = 4.0 / (1.0 - alpha)
    return CheckResult("ms_contrast.indicator", lhs, rhs, abs(lhs / rhs - 1.0) <= tol.ms_limit,
                       "alpha times the W^{alpha,1} seminorm of an interval", param=alpha)


def tail_scaling_check(beta, R_list=(1, 2, 4, 8), L=256.0, N=4096, scales=None, tol=TOLERANCES) -> ConvergenceReport:
    """R-dependence of the tail operator nabla^beta_{>=R} from H^1 to L^1.

    The operator norm is probed by the sup over an L^1-normalised dilation
    family f_s(x) = s^{-n} g'(x/s) of ||T_R f_s||_1 / ||f_s||_{H^1}; dilation
    invariance makes it scale exactly like R^{-beta}.  The decay of the fixed
    field (s = 1), which is steeper, is reported as a diagnostic.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    scales = 2.0 ** np.arange(0.0, 5.51, 0.25) if scales is None else np.asarray(scales, dtype=float)
    g = Grid(1, L, N)
    cfg = quadrature.QuadratureConfig(decay_threshold=1e-4)
    fam = [sample(TestFunctionSpec("gaussian_dilated", {"scale": float(s), "derivative_axis": 0}), g) for s in scales]
    hn = [hardy_norm(f, diagnose=False).value for f in fam]
    base = sample(TestFunctionSpec("gaussian_derivative"), g)
    rows = []
    for R in R_list:
        probe = [lp_norm(quadrature.quad_tail_op(f, beta, R, cfg), 1) / h for f, h in zip(fam, hn)]
        fixed = lp_norm(quadrature.quad_tail_op(base, beta, R, cfg), 1)
        rows.append((R, max(probe), float(scales[int(np.argmax(probe))]), fixed))
    slope = fit_slope([r[0] for r in rows], [r[1] for r in rows])
    ok = abs(slope + beta) <= tol.tail_slope
    return ConvergenceReport(f"tail_scaling.b{beta:g}", rows, slope, rows[-1][1], ok, tol.tail_slope)


def fixed_field_tail_slope(report: ConvergenceReport):
    return fit_slope([r[0] for r in report.rows], [r[3] for r in report.rows])


def besov_strict_inclusion_demo(alpha, n=2, L=16.0, sizes=(128, 256), tol=TOLERANCES) -> CheckResult:
    """Besov seminorm of eta_1 |x|^{alpha-n} stays put under refinement while its L^{n/(n-alpha)} norm grows."""
    if n != 2:
        raise ValueError("the strict-inclusion counterexample needs n >= 2; only n = 2 grids are supported")
    q = n / (n - alpha)
    bes, lq = [], []
    for N in sizes:
        f = besov_counterexample(alpha, Grid(2, L, N))
        bes.append(besov_sup_seminorm(f, alpha, singular_order=n - alpha))
        lq.append(lp_norm(f, q))
    drift = abs(bes[-1] / bes[0] - 1.0)
    growth = lq[-1] / lq[0] - 1.0
    ok = drift <= tol.besov_stable and growth > tol.lq_growth
    return CheckResult(f"besov_inclusion.a{alpha:g}", drift, tol.besov_stable, ok,
                       "Besov seminorm stable, critical Lebesgue norm diverging", param=alpha,
                       extras=(("lq_growth", growth), ("besov_coarse", bes[0]), ("besov_fine", bes[-1])))


def dee_bound_check(f: ScalarField, alpha, p, tol=TOLERANCES):
    """||D^alpha f||_p <= 2 n omega_n / (alpha (1-alpha)) ||f||_p^alpha ||grad f||_p^{1-alpha},
    and |(-Delta)^{alpha/2} f| <= |nu| D^alpha f node by node."""
    n = f.grid.n
    d = quadrature.quad_dee_alpha(f, alpha)
    lhs = lp_norm(d, p)
    grad = spectral.spectral_gradient(f)
    rhs = 2 * n * constants.omega(n) / (alpha * (1 - alpha)) * lp_norm(f, p) ** alpha * lp_norm(grad, p) ** (1 - alpha)
    lap = quadrature.quad_frac_laplacian(f, alpha)
    gap = np.abs(lap.values) - abs(constants.nu(n, alpha)) * d.values
    scale = float(np.max(np.abs(lap.values))) or 1.0
    worst = float(np.max(gap)) / scale
    return [
        CheckResult(f"dee_bound.a{alpha:g}.p{p:g}", lhs, rhs, lhs <= rhs, "L^p bound on D^alpha", param=alpha),
        CheckResult(f"dee_pointwise.a{alpha:g}", worst, 0.0, worst <= 1e-12,
                    "|(-Delta)^{alpha/2} f| <= |nu| D^alpha f", param=alpha),
    ]


# -- backend and identity checks ------------------------------------------------------


def _rel_inf(a, b):
    a = a.stack() if isinstance(a, VectorField) else a.values
    b = b.stack() if isinstance(b, VectorField) else b.values
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def _rel_l2(a, b):
    a = a.stack() if isinstance(a, VectorField) else a.values
    b = b.stack() if isinstance(b, VectorField) else b.values
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def constants_check(tol=TOLERANCES):
    out = []
    v = constants.mu(1, 0.0) * math.pi
    out.append(CheckResult("constants.mu10_pi", v, 1.0, abs(v - 1.0) <= tol.constants, "mu(1,0) pi = 1"))
    for n in (1, 2):
        a = constants.mu(n, 0.0)
        b = math.pi ** (-(n + 1) / 2.0) * math.gamma((n + 1) / 2.0)
        out.append(CheckResult(f"constants.mu{n}0_riesz", a, b, abs(a - b) <= tol.constants * b,
                               "mu(n,0) equals the Riesz normalisation", param=n))
        r = constants.mu_near_one_ratio(n, 0.999)
        out.append(CheckResult(f"constants.mu_near_one.n{n}", r, 1.0, abs(r - 1.0) <= tol.mu_one,
                               "mu omega / (1 - alpha) at alpha = 0.999", param=0.999))
    return out


def backend_agreement(n, L, N, alphas, pad=8, tol=TOLERANCES):
    """Relative sup-norm gap between quad_nabla and spectral_nabla on a Gaussian."""
    g = Grid(n, L, N)
    f = sample(TestFunctionSpec("gaussian"), g)
    out = []
    for a in alphas:
        e = _rel_inf(quadrature.quad_nabla(f, a), spectral.spectral_nabla(f, a, pad=pad))
        out.append(CheckResult(f"backends.agreement.n{n}", e, tol.backend, e <= tol.backend,
                               "spectral vs quadrature nabla^alpha", param=a))
    return out


def halving_check(n, L, sizes, alphas, pad=8, tol=TOLERANCES):
    """Disagreement on a coarse grid over that after halving h; must exceed the factor."""
    out = []
    cfg = quadrature.QuadratureConfig(decay_threshold=1e-3)
    for a in alphas:
        errs = []
        for N in sizes:
            f = sample(TestFunctionSpec("gaussian"), Grid(n, L, N))
            errs.append(_rel_inf(quadrature.quad_nabla(f, a, cfg), spectral.spectral_nabla(f, a, pad=pad)))
        gain = errs[0] / errs[1]
        out.append(CheckResult(f"backends.halving.n{n}", gain, tol.halving, gain >= tol.halving,
                               "agreement improves when h halves", param=a,
                               extras=(("coarse", errs[0]), ("fine", errs[1]))))
    return out


def riesz_sign_check(L=12.0, N=1024, pad=4, tol=TOLERANCES):
    """Riesz transform of x e^{-x^2} at 0 is +1/sqrt(pi); the spectral symbol must reproduce it."""
    g = Grid(1, L, N)
    f = sample(TestFunctionSpec("gaussian_derivative", {"amplitude": -0.5}), g)
    q = quadrature.quad_riesz(f)
    s = spectral.spectral_riesz(f, pad=pad)
    target = 1.0 / math.sqrt(math.pi)
    c = q[0].center_value()
    gap = _rel_inf(s, q)
    return [
        CheckResult("backends.riesz_center", c, target, abs(c - target) <= tol.riesz_center,
                    "quadrature Riesz transform of x exp(-x^2) at 0"),
        CheckResult("backends.riesz_symbol", gap, tol.backend, gap <= tol.backend,
                    "spectral symbol i xi/|xi| reproduces the quadrature field"),
    ]


def _duality_pairs(g):
    spec = TestFunctionSpec
    n = g.n
    fs = [
        sample(spec("gaussian"), g),
        sample(spec("gaussian", {"sigma": 0.8, "center": 0.5}), g),
        sample(spec("gaussian_derivative", {"sigma": 1.2}), g),
    ]
    phis = []
    for k, (a, b) in enumerate([("gaussian_derivative", "gaussian"), ("gaussian", "gaussian_derivative"),
                                ("gaussian", "gaussian")]):
        c1 = sample(spec(a, {"sigma": 0.9 + 0.1 * k, "center": -0.3}), g)
        if n == 1:
            phis.append(VectorField(g, (c1,)))
        else:
            c2 = sample(spec(b, {"sigma": 1.1, "center": 0.2, "axis": 1} if b == "gaussian_derivative"
                             else {"sigma": 1.1, "center": 0.2}), g)
            phis.append(VectorField(g, (c1, c2)))
    return list(zip(fs, phis))


def duality_check(n, L, N, alphas, tol=TOLERANCES):
    """|int f div^alpha phi + int nabla^alpha f . phi| <= tol ||f||_2 ||phi||_2."""
    g = Grid(n, L, N)
    out = []
    for i, (f, phi) in enumerate(_duality_pairs(g)):
        for a in alphas:
            lhs1 = float(np.sum(f.values * quadrature.quad_div(phi, a).values))
            grad = quadrature.quad_nabla(f, a)
            lhs2 = float(sum(np.sum(c.values * p.values) for c, p in zip(grad, phi)))
            res = abs(lhs1 + lhs2) * g.cell_volume
            scale = lp_norm(f, 2) * lp_norm(phi, 2)
            out.append(CheckResult(f"backends.duality.n{n}.pair{i}", res, tol.duality * scale,
                                   res <= tol.duality * scale, "fractional gradient and divergence are dual",
                                   param=a))
    return out


def semigroup_check(n, L, N, tol=TOLERANCES):
    """I_0.3 I_0.4 = I_0.7 (both backends) and nabla^beta = I_{alpha-beta} nabla^alpha (spectral)."""
    g = Grid(n, L, N)
    f = sample(TestFunctionSpec("gaussian_derivative"), g)
    P = spectral.MultiplierSpec.potential
    once = spectral.apply_multiplier(f, P(0.7))
    twice = spectral.apply_multiplier(f, [P(0.3), P(0.4)])
    e_spec = _rel_l2(twice, once)
    relaxed = quadrature.QuadratureConfig(decay_threshold=1.0)
    q1 = quadrature.quad_riesz_potential(f, 0.3)
    q2 = quadrature.quad_riesz_potential(q1, 0.4, relaxed)
    e_quad = _rel_l2(q2, quadrature.quad_riesz_potential(f, 0.7))
    out = [
        CheckResult(f"semigroup.spectral.n{n}", e_spec, tol.semigroup_spectral, e_spec <= tol.semigroup_spectral,
                    "I_0.3 I_0.4 = I_0.7"),
        CheckResult(f"semigroup.quadrature.n{n}", e_quad, tol.semigroup_quadrature,
                    e_quad <= tol.semigroup_quadrature, "I_0.3 I_0.4 = I_0.7"),
    ]
    for a, b in ((0.8, 0.3), (0.6, 0.2)):
        direct = spectral.spectral_nabla(f, b)
        rep = spectral.spectral_nabla(f, a, then=[P(a - b)])
        e = _rel_l2(rep, direct)
        out.append(CheckResult(f"representation.spectral.n{n}.a{a:g}", e, tol.semigroup_spectral,
                               e <= tol.semigroup_spectral, "nabla^beta = I_{alpha-beta} nabla^alpha", param=b))
    return out


def mihlin_uniformity(n=1, points=11, tol=TOLERANCES):
    """Mihlin-Hormander norm of |xi|^beta / (1 + |xi|^alpha) over a (alpha, beta) grid with beta <= alpha."""
    grid = np.linspace(0.0, 1.0, points)
    vals, drift = [], 0.0
    for a in grid:
        for b in grid[grid <= a + 1e-12]:
            v = spectral.mihlin_norm_estimate(a, b, n=n)
            fine = spectral.mihlin_norm_estimate(a, b, xi_grid=spectral.default_xi_grid(40), n=n)
            vals.append(v)
            drift = max(drift, abs(fine / v - 1.0))
    spread = max(vals) / min(vals)
    finite = all(math.isfinite(v) for v in vals)
    return [
        CheckResult(f"mihlin.spread.n{n}", spread, tol.mihlin_spread, finite and spread <= tol.mihlin_spread,
                    "norm uniformly bounded over the (alpha, beta) grid",
                    extras=(("max", max(vals)), ("min", min(vals)))),
        CheckResult(f"mihlin.refinement.n{n}", drift, tol.mihlin_refine, drift <= tol.mihlin_refine,
                    "stable under xi-grid refinement"),
    ]


def with_overrides(tol: Tolerances, **kw) -> Tolerances:
    return replace(tol, **kw)
