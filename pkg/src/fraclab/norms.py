"""Discrete norms and seminorms on sampled fields."""

from dataclasses import dataclass
import math

import numpy as np

from . import constants, kernels
from .fields import Grid, ScalarField, VectorField
from .lattice import centred_epstein_zeta, epstein_zeta

NORM_KINDS = ("lp", "gagliardo", "hardy1", "besov_sup", "frac_variation", "holder", "sup")


def _pointwise(f):
    if isinstance(f, VectorField):
        return f.magnitude()
    return np.abs(f.values)


def lp_norm(f, p=2.0):
    """(sum |f|^p h^n)^{1/p}; ``p = inf`` gives the sup norm. Vector fields use |f(x)|."""
    a = _pointwise(f)
    if p == math.inf or p == "inf":
        return float(np.max(a)) if a.size else 0.0
    p = float(p)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    s = float(np.sum(a ** p) * f.grid.cell_volume)
    return s ** (1.0 / p)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _offset_table(grid, degree, volume=True):
    """h^n |kh|^{-degree} (or without h^n) on the half-space offset layout, 0 at k = 0."""
    N, h = grid.N, grid.h
    if grid.n == 1:
        k = np.arange(N, dtype=float)
    else:
        k = np.hypot(np.arange(N, dtype=float)[:, None], np.arange(-(N - 1), N, dtype=float)[None, :])
    with np.errstate(divide="ignore"):
        w = np.where(k > 0, (k * h) ** (-degree), 0.0)
    if volume:
        w = w * grid.cell_volume
    return np.ascontiguousarray(w)


def gagliardo_seminorm(f: ScalarField, alpha, p=1.0):
    """[f]_{W^{alpha,p}} = (int int |f(x)-f(y)|^p / |x-y|^{n+p alpha})^{1/p}.

    Node pairs inside the box are summed directly (diagonal excluded).  The
    field vanishes outside the box, so pairs with one point outside add
    2 sum_x |f(x)|^p times the lattice sum of the kernel over the outside
    offsets, which is taken in closed form.
    """
    _check_alpha(alpha)
    p = float(p)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    grid = f.grid
    deg = grid.n + p * alpha
    w = _offset_table(grid, deg)
    inside = kernels.absdiff_sum(f.values, w, p)
    inbox = kernels.pair_sum(np.ones(grid.shape), w, +1)
    full = grid.h ** (grid.n - deg) * epstein_zeta(grid.n, deg)
    outside = 2.0 * np.abs(f.values) ** p * (full - inbox)
    total = float(np.sum(inside + outside) * grid.cell_volume)
    return total ** (1.0 / p)


@dataclass(frozen=True)
class HardyNorm:
    """||f||_1 + ||Rf||_1 on the box, and on the box doubled (growth diagnostic)."""

    value: float
    doubled: float

    @property
    def growth(self):
        return self.doubled / self.value - 1.0 if self.value else 0.0

    def __float__(self):
        return self.value


def _riesz(f, backend):
    if backend == "spectral":
        from .spectral import spectral_riesz
        return spectral_riesz(f)
    if backend == "quadrature":
        from .quadrature import quad_riesz
        return quad_riesz(f)
    raise ValueError(f"unknown backend '{backend}'")


def hardy_norm(f: ScalarField, backend="spectral", diagnose=True) -> HardyNorm:
    """H^1 norm ||f||_1 + ||Rf||_1.

    With ``diagnose`` the value is recomputed with f zero-extended to a box of
    twice the size; for zero-mean fields the two agree, otherwise ||Rf||_1
    keeps growing with the box.
    """
    def one(g):
        return lp_norm(g, 1) + lp_norm(_riesz(g, backend), 1)

    value = one(f)
    doubled = one(f.embed(2)) if diagnose else value
    return HardyNorm(value, doubled)


def default_shift_steps(grid, count=24):
    """Log-spaced integer shifts from 1 to N/8 steps (|y| from h to L/4), powers of two included."""
    top = max(1, grid.N // 8)
    logs = np.round(np.logspace(0.0, math.log10(top), count)).astype(int)
    pows = 2 ** np.arange(int(math.log2(top)) + 1)
    return np.unique(np.concatenate([logs, pows, [top]]))


def _shift_directions(n):
    if n == 1:
        return [(1,)]
    return [(1, 0), (0, 1), (1, 1), (1, -1)]


def translation_difference(f: ScalarField, steps, p=1.0):
    """||f(. + y) - f||_p with y = steps * h, f taken as zero outside the box."""
    steps = np.broadcast_to(np.asarray(steps, dtype=int), (f.grid.n,))
    m = int(np.max(np.abs(steps)))
    v = np.pad(f.values, m) if m else f.values
    shifted = np.roll(v, tuple(-int(s) for s in steps), axis=tuple(range(f.grid.n)))
    d = np.abs(shifted - v)
    if p == math.inf:
        return float(np.max(d))
    return float(np.sum(d ** p) * f.grid.cell_volume) ** (1.0 / p)


def point_singularity_defect(f: ScalarField, order):
    """Leading error of the node sum of |x|^{-order} sampled at cell centres.

    For f ~ A |x|^{-order} near the origin (0 < order < n + 1, order != n),
    h^n sum f(x_k) - int f = A h^{n-order} Zc(order) + ..., with Zc the
    half-shifted lattice zeta constant; A is read off at a node next to the origin.
    """
    grid = f.grid
    c = grid.N // 2
    r0 = grid.h * math.sqrt(grid.n) / 2.0
    amp = float(f.values[(c,) * grid.n]) * r0 ** order
    return amp * grid.h ** (grid.n - order) * centred_epstein_zeta(grid.n, order)


def besov_sup_seminorm(f: ScalarField, alpha, shifts=None, singular_order=None):
    """max over a fixed shift set of ||f(. + y) - f||_1 / |y|^alpha.

    Shifts run along the axes (and the two diagonals when n = 2) with the step
    counts of :func:`default_shift_steps` unless given.  ``singular_order``
    declares a point singularity A|x|^{-order} at the origin: its two copies
    in f(. + y) - f are then corrected for the undersampled cells next to them.
    """
    _check_alpha(alpha)
    steps = default_shift_steps(f.grid) if shifts is None else np.asarray(shifts, dtype=int)
    defect = 0.0 if singular_order is None else 2.0 * point_singularity_defect(f, singular_order)
    best = 0.0
    for d in _shift_directions(f.grid.n):
        for s in steps:
            vec = np.asarray(d) * int(s)
            y = f.grid.h * float(np.linalg.norm(vec))
            best = max(best, (translation_difference(f, vec, 1.0) - defect) / y ** alpha)
    return best


def far_field_factor(n, L, alpha):
    """int over the complement of [-L, L]^n of |x|^{-n-alpha} dx."""
    if n == 1:
        return 2.0 * L ** (-alpha) / alpha
    th = (np.arange(4096) + 0.5) * (2.0 * math.pi / 4096)
    ang = float(np.mean(np.maximum(np.abs(np.cos(th)), np.abs(np.sin(th))) ** alpha) * 2.0 * math.pi)
    return L ** (-alpha) / alpha * ang


def frac_variation(f: ScalarField, alpha, backend="spectral", far_field=False, pad=None):
    """||nabla^alpha f||_1 on the box.

    ``far_field`` adds the monopole tail mu |int f| |x|^{-n-alpha} integrated
    over the outside of the box, which the box misses when int f != 0 and
    alpha is small.
    """
    if f.singular:
        raise ValueError(f"field '{f.tag}' is flagged singular; fractional variation refuses it")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if backend == "spectral":
        from .spectral import DEFAULT_PAD, spectral_nabla
        v = spectral_nabla(f, alpha, pad=pad or DEFAULT_PAD)
    elif backend == "quadrature":
        from .quadrature import quad_nabla
        v = quad_nabla(f, alpha)
    else:
        raise ValueError(f"unknown backend '{backend}'")
    total = lp_norm(v, 1)
    if far_field and alpha > 0:
        total += constants.mu(f.grid.n, alpha) * abs(f.integral()) * far_field_factor(f.grid.n, f.grid.L, alpha)
    return total


def holder_seminorm(f: ScalarField, alpha, window=None):
    """max over node pairs in the window of |f(x) - f(y)| / |x - y|^alpha.

    ``window`` is the half width of a centred sub-box (default: the whole box).
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    grid = f.grid
    vals = f.values
    if window is not None:
        inside = np.abs(grid.axis()) <= window
        idx = np.flatnonzero(inside)
        if idx.size < 2:
            raise ValueError(f"window of half width {window} holds fewer than two nodes")
        vals = vals[(slice(idx[0], idx[-1] + 1),) * grid.n]
    # a centred window of a cell-centred grid holds an even node count
    sub = Grid(grid.n, vals.shape[0] * grid.h / 2.0, vals.shape[0])
    w = _offset_table(sub, alpha, volume=False)
    return float(np.max(kernels.absdiff_max(np.ascontiguousarray(vals), w)))
