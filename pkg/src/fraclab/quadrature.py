"""Real-space lattice quadrature for the singular integral operators.

Every operator is evaluated as a punctured lattice sum over node offsets
k h, paired as k / -k so odd kernels cancel their leading singularity.  The
remaining O(h^{1-alpha}) (odd kernels) or O(h^{2-alpha}) (even kernels)
discretisation bias of the punctured sum is removed with the lattice zeta
constants of :mod:`fraclab.lattice`, using finite-difference derivatives of
f at the target node.  The difference-form term -f(x) int K over the whole
space is summed exactly over the infinite lattice.

This backend is O(N^{2n}) and independent of the spectral backend, which it
is used to validate.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from . import constants, kernels
from .fields import ScalarField, VectorField, boundary_mass_fraction, smoothstep_eta
from .lattice import abs_direction_factor, epstein_zeta, even_hessian_zeta, odd_gradient_zeta

log = logging.getLogger(__name__)

CLAMP_POLICIES = ("refuse", "cell_center")


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs for the lattice quadrature.

    tail_box_factor: None sums the difference-form term -f(x) K over the
        whole lattice in closed form; a number c >= 1 truncates it to the box
        [-cL, cL]^n instead (no tail model; see :func:`tail_bound`).
    pv_epsilon: exclusion radius in units of h.  0 keeps every offset and
        applies the zeta correction; > 0 drops offsets with |k| <= pv_epsilon
        and skips the correction (plain truncated principal value).
    clamp: what to do with fields flagged singular ("refuse" or "cell_center").
    decay_threshold: largest admissible L^1 mass fraction in the outer frame.
    """

    tail_box_factor: float = None
    pv_epsilon: float = 0.0
    clamp: str = "refuse"
    decay_threshold: float = 1e-6

    def __post_init__(self):
        if self.tail_box_factor is not None and self.tail_box_factor < 1:
            raise ValueError("tail_box_factor must be >= 1")
        if self.tail_box_factor is not None and float(self.tail_box_factor) != int(self.tail_box_factor):
            raise ValueError("tail_box_factor must be an integer multiple of the box")
        if self.pv_epsilon < 0:
            raise ValueError("pv_epsilon must be non-negative")
        if self.clamp not in CLAMP_POLICIES:
            raise ValueError(f"clamp policy must be one of {CLAMP_POLICIES}")


DEFAULT_CONFIG = QuadratureConfig()


# -- offset tables -------------------------------------------------------------


def _half_offsets(grid):
    """Offset coordinates z (list per axis) and |k| for the half-space table layout."""
    N, h = grid.N, grid.h
    if grid.n == 1:
        k = np.arange(N, dtype=float)
        return [k * h], np.abs(k)
    k1 = np.arange(N, dtype=float)[:, None]
    k2 = np.arange(-(N - 1), N, dtype=float)[None, :]
    k1, k2 = np.broadcast_arrays(k1, k2)
    return [k1 * h, k2 * h], np.hypot(k1, k2)


def _table(grid, fn, cfg):
    """Evaluate fn(z_list, r) on the offset table, zero at k = 0 and inside pv_epsilon."""
    z, kabs = _half_offsets(grid)
    r = kabs * grid.h
    with np.errstate(divide="ignore", invalid="ignore"):
        w = fn(z, r)
    w = np.where(kabs > max(cfg.pv_epsilon, 0.0), w, 0.0)
    return np.ascontiguousarray(w * grid.cell_volume)


def _zeta_on(cfg):
    return cfg.pv_epsilon == 0


# -- finite differences (zero fill outside the box) ----------------------------


def _pad2(a, axis):
    pad = [(0, 0)] * a.ndim
    pad[axis] = (2, 2)
    return np.pad(a, pad)


def fd_gradient(values, h):
    """Fourth-order central first derivatives along each axis."""
    out = []
    for ax in range(values.ndim):
        p = _pad2(values, ax)
        s = lambda o: np.take(p, np.arange(2 + o, 2 + o + values.shape[ax]), axis=ax)
        out.append((-s(2) + 8.0 * s(1) - 8.0 * s(-1) + s(-2)) / (12.0 * h))
    return out


def fd_laplacian(values, h):
    """Fourth-order central Laplacian."""
    out = np.zeros_like(values)
    for ax in range(values.ndim):
        p = _pad2(values, ax)
        s = lambda o: np.take(p, np.arange(2 + o, 2 + o + values.shape[ax]), axis=ax)
        out += (-s(2) + 16.0 * s(1) - 30.0 * values + 16.0 * s(-1) - s(-2)) / (12.0 * h * h)
    return out


def _one_sided_edges(values, h, comps):
    for ax, c in enumerate(comps):
        edge = np.gradient(values, h, axis=ax, edge_order=2)
        sl = [slice(None)] * values.ndim
        for rows in (slice(0, 2), slice(-2, None)):
            sl[ax] = rows
            c[tuple(sl)] = edge[tuple(sl)]
    return comps


def _local_gradient(values, h, cfg):
    """Stencil for the local corrections: zero fill, or one-sided when the region is the box itself."""
    comps = fd_gradient(values, h)
    if cfg.tail_box_factor == 1:
        comps = _one_sided_edges(values, h, comps)
    return comps


def _local_laplacian(values, h, cfg):
    lap = fd_laplacian(values, h)
    if cfg.tail_box_factor == 1:
        lap = lap.copy()
        for ax in range(values.ndim):
            d2 = np.gradient(np.gradient(values, h, axis=ax, edge_order=2), h, axis=ax, edge_order=2)
            sl = [slice(None)] * values.ndim
            for rows in (slice(0, 2), slice(-2, None)):
                sl[ax] = rows
                # replace this axis' share of the stencil at the edge rows
                p = _pad2(values, ax)
                sh = lambda o: np.take(p, np.arange(2 + o, 2 + o + values.shape[ax]), axis=ax)
                central = (-sh(2) + 16.0 * sh(1) - 30.0 * values + 16.0 * sh(-1) - sh(-2)) / (12.0 * h * h)
                lap[tuple(sl)] += d2[tuple(sl)] - central[tuple(sl)]
    return lap


# -- input checks ----------------------------------------------------------------


def _check_field(f, cfg, what="field"):
    if f.singular and cfg.clamp == "refuse":
        raise ValueError(f"{what} '{f.tag}' is flagged singular; quadrature refuses it")
    frac = boundary_mass_fraction(f.values)
    if frac > cfg.decay_threshold:
        raise ValueError(
            f"{what} '{f.tag}' does not decay inside the box "
            f"(boundary mass fraction {frac:.2e} > {cfg.decay_threshold:.1e})"
        )


def _check_order(alpha, lo=0.0, hi=1.0, name="alpha"):
    if not lo < alpha < hi:
        raise ValueError(f"{name} must lie in ({lo}, {hi}), got {alpha}")


def _full_lattice_sum(grid, degree, cfg):
    """h^n sum_{k != 0} |kh|^{-degree} over the whole lattice (degree > n)."""
    if cfg.pv_epsilon > 0:
        # drop the excluded shell from the closed form
        z, kabs = _half_offsets(grid)
        excl = (kabs > 0) & (kabs <= cfg.pv_epsilon)
        shell = 2.0 * np.sum(kabs[excl] ** (-degree))
    else:
        shell = 0.0
    return grid.h ** (grid.n - degree) * (epstein_zeta(grid.n, degree) - shell)


def _difference_weight(f, degree, w, cfg):
    """sum_{k != 0} h^n |kh|^{-degree} over the integration region, per node."""
    grid = f.grid
    if cfg.tail_box_factor is None:
        return np.full(grid.shape, _full_lattice_sum(grid, degree, cfg))
    c = int(cfg.tail_box_factor)
    if c == 1:
        return kernels.pair_sum(np.ones(grid.shape), w, +1)
    big = grid.enlarge(c)
    wbig = _table(big, lambda z, r: r ** (-degree), cfg)
    off = (big.N - grid.N) // 2
    full = kernels.pair_sum(np.ones(big.shape), wbig, +1)
    return full[(slice(off, off + grid.N),) * grid.n]


def tail_bound(f, degree, cfg=DEFAULT_CONFIG):
    """Largest neglected difference-form contribution |f(x)| sum_{outside} h^n |kh|^{-degree}.

    Zero for the closed-form default; for a truncated config it measures what
    the truncation drops.
    """
    if cfg.tail_box_factor is None:
        return 0.0
    grid = f.grid
    w = _table(grid, lambda z, r: r ** (-degree), cfg)
    inside = _difference_weight(f, degree, w, cfg)
    full = _full_lattice_sum(grid, degree, cfg)
    return float(np.max(np.abs(f.values) * (full - inside)))


# -- operators -------------------------------------------------------------------


def _region_weight(grid, fn, parity, cfg):
    """sum over the truncated region of the kernel table, per node (the difference-form subtrahend).

    Only used when ``tail_box_factor`` is set; ``parity`` -1 gives the odd
    kernel's one-sided imbalance near the region edge.
    """
    c = int(cfg.tail_box_factor)
    if c == 1:
        return kernels.pair_sum(np.ones(grid.shape), _table(grid, fn, cfg), parity)
    big = grid.enlarge(c)
    off = (big.N - grid.N) // 2
    full = kernels.pair_sum(np.ones(big.shape), _table(big, fn, cfg), parity)
    return full[(slice(off, off + grid.N),) * grid.n]


def _odd_kernel_sums(values, grid, order, cfg, window=None):
    """sum_{k != 0} h^n z_j |z|^{-(n+order+1)} window(z) (f(x + z) - f(x)), component j.

    Over the whole lattice the f(x) term vanishes by symmetry; a truncated
    region keeps it, so a constant field maps to zero there too.
    """
    out = []
    for j in range(grid.n):
        if window is None:
            fn = lambda z, r, j=j: z[j] / r ** (grid.n + order + 1)
        else:
            fn = lambda z, r, j=j: z[j] * window(r) / r ** (grid.n + order + 1)
        s = kernels.pair_sum(values, _table(grid, fn, cfg), -1)
        if cfg.tail_box_factor is not None:
            s = s - values * _region_weight(grid, fn, -1, cfg)
        out.append(s)
    return out


def _odd_correction(grad_j, grid, order, cfg):
    if not _zeta_on(cfg):
        return 0.0
    return grid.h ** (1.0 - order) * odd_gradient_zeta(grid.n, order) * grad_j


def quad_nabla(f: ScalarField, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> VectorField:
    """Fractional gradient by corrected symmetric-pair lattice sums."""
    _check_order(alpha)
    _check_field(f, cfg)
    grid = f.grid
    sums = _odd_kernel_sums(f.values, grid, alpha, cfg)
    grad = _local_gradient(f.values, grid.h, cfg)
    c = constants.mu(grid.n, alpha)
    comps = [c * (s - _odd_correction(g, grid, alpha, cfg)) for s, g in zip(sums, grad)]
    return VectorField.from_arrays(grid, comps, tag=f"quad_nabla(alpha={alpha})")


def quad_div(phi: VectorField, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ScalarField:
    """Fractional divergence (dot-product kernel) of a vector field."""
    _check_order(alpha)
    grid = phi.grid
    if len(phi) != grid.n:
        raise ValueError("vector field must have n components")
    total = np.zeros(grid.shape)
    for j, comp in enumerate(phi.components):
        _check_field(comp, cfg, what=f"component {j}")
        fn = lambda z, r, j=j: z[j] / r ** (grid.n + alpha + 1)
        s = _odd_kernel_sums(comp.values, grid, alpha, cfg)[j]
        g = _local_gradient(comp.values, grid.h, cfg)[j]
        total = total + (s - _odd_correction(g, grid, alpha, cfg))
    return ScalarField(grid, constants.mu(grid.n, alpha) * total, tag=f"quad_div(alpha={alpha})")


def quad_riesz(f: ScalarField, cfg: QuadratureConfig = DEFAULT_CONFIG) -> VectorField:
    """Riesz transform as a principal value: pi^{-(n+1)/2} Gamma((n+1)/2) p.v. int y f(x+y)/|y|^{n+1}."""
    _check_field(f, cfg)
    grid = f.grid
    sums = _odd_kernel_sums(f.values, grid, 0.0, cfg)
    grad = _local_gradient(f.values, grid.h, cfg)
    c = constants.riesz_norm_const(grid.n)
    comps = [c * (s - _odd_correction(g, grid, 0.0, cfg)) for s, g in zip(sums, grad)]
    return VectorField.from_arrays(grid, comps, tag="quad_riesz")


def quad_frac_laplacian(f: ScalarField, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ScalarField:
    """nu_{n,alpha} int (f(x+y) - f(x)) / |y|^{n+alpha} dy."""
    _check_order(alpha)
    _check_field(f, cfg)
    grid = f.grid
    n, h = grid.n, grid.h
    deg = n + alpha
    w = _table(grid, lambda z, r: r ** (-deg), cfg)
    s = kernels.pair_sum(f.values, w, +1)
    total = s - f.values * _difference_weight(f, deg, w, cfg)
    if _zeta_on(cfg):
        lap = _local_laplacian(f.values, h, cfg)
        total = total - h ** (2.0 - alpha) * 0.5 * lap * even_hessian_zeta(n, deg)
    return ScalarField(grid, constants.nu(n, alpha) * total, tag=f"quad_frac_laplacian(alpha={alpha})")


def quad_riesz_potential(f: ScalarField, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ScalarField:
    """Riesz potential of order alpha in (0, n)."""
    grid = f.grid
    n, h = grid.n, grid.h
    _check_order(alpha, 0.0, float(n))
    _check_field(f, cfg)
    w = _table(grid, lambda z, r: r ** (alpha - n), cfg)
    total = kernels.pair_sum(f.values, w, +1)
    if _zeta_on(cfg):
        lap = fd_laplacian(f.values, h)
        total = total - h ** alpha * f.values * epstein_zeta(n, n - alpha)
        total = total - h ** (alpha + 2.0) * 0.5 * lap * even_hessian_zeta(n, n - alpha)
    c = constants.riesz_potential_const(n, alpha)
    return ScalarField(grid, c * total, tag=f"quad_riesz_potential(alpha={alpha})")


def _check_radius(R):
    if not R > 0:
        raise ValueError(f"cut-off radius must be positive, got {R}")


def quad_tail_op(f: ScalarField, beta: float, R: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> VectorField:
    """mu_{n,beta} int f(x+y) y (1 - eta_R(y)) / |y|^{n+beta+1} dy (bounded kernel)."""
    _check_order(beta, name="beta")
    _check_radius(R)
    _check_field(f, cfg)
    grid = f.grid
    sums = _odd_kernel_sums(f.values, grid, beta, cfg, window=lambda r: 1.0 - smoothstep_eta(r / R))
    c = constants.mu(grid.n, beta)
    return VectorField.from_arrays(grid, [c * s for s in sums], tag=f"quad_tail_op(beta={beta},R={R})")


def quad_near_op(f: ScalarField, beta: float, R: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> VectorField:
    """The eta_R-windowed near part of the fractional gradient; near + tail = nabla."""
    _check_order(beta, name="beta")
    _check_radius(R)
    _check_field(f, cfg)
    grid = f.grid
    sums = _odd_kernel_sums(f.values, grid, beta, cfg, window=lambda r: smoothstep_eta(r / R))
    grad = _local_gradient(f.values, grid.h, cfg)
    c = constants.mu(grid.n, beta)
    comps = [c * (s - _odd_correction(g, grid, beta, cfg)) for s, g in zip(sums, grad)]
    return VectorField.from_arrays(grid, comps, tag=f"quad_near_op(beta={beta},R={R})")


def quad_far_op(f: ScalarField, alpha: float, eps: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> VectorField:
    """mu_{n,alpha} int_{|y| > eps} y f(x+y) / |y|^{n+alpha+1} dy (sharp cut-off, bounded kernel)."""
    _check_order(alpha)
    _check_radius(eps)
    _check_field(f, cfg)
    grid = f.grid
    sums = _odd_kernel_sums(f.values, grid, alpha, cfg, window=lambda r: (r > eps).astype(float))
    c = constants.mu(grid.n, alpha)
    return VectorField.from_arrays(grid, [c * s for s in sums], tag=f"quad_far_op(alpha={alpha},eps={eps})")


def quad_dee_alpha(f: ScalarField, alpha: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> ScalarField:
    """int |f(x+y) - f(x)| / |y|^{n+alpha} dy, with y the translation offset.

    The local correction adds the magnitudes of the first- and second-order
    zeta terms, so the discrete value dominates |(-Delta)^{alpha/2} f| / |nu|
    node by node exactly as the continuous integrals do.  In two dimensions
    the first-order term uses the direction-averaged lattice constant.
    """
    _check_order(alpha)
    _check_field(f, cfg)
    grid = f.grid
    n, h = grid.n, grid.h
    deg = n + alpha
    w = _table(grid, lambda z, r: r ** (-deg), cfg)
    inside = kernels.absdiff_sum(f.values, w, 1.0)
    inbox = kernels.pair_sum(np.ones(grid.shape), w, +1)
    outside = _difference_weight(f, deg, w, cfg) - inbox
    total = inside + np.abs(f.values) * outside
    if _zeta_on(cfg):
        grad = _local_gradient(f.values, h, cfg)
        gnorm = np.sqrt(sum(g * g for g in grad))
        lap = _local_laplacian(f.values, h, cfg)
        z1 = abs(abs_direction_factor(n) * epstein_zeta(n, n + alpha - 1.0))
        z2 = abs(even_hessian_zeta(n, deg))
        total = total + h ** (1.0 - alpha) * z1 * gnorm + h ** (2.0 - alpha) * 0.5 * np.abs(lap) * z2
    return ScalarField(grid, total, tag=f"quad_dee_alpha(alpha={alpha})")


def lattice_gradient(f: ScalarField) -> VectorField:
    """Fourth-order central gradient, second-order one-sided in the two outer layers.

    Unlike the zero-fill stencil used for the local corrections, this one does
    not assume f vanishes outside the box (Riesz potentials do not).
    """
    h = f.grid.h
    comps = _one_sided_edges(f.values, h, fd_gradient(f.values, h))
    return VectorField.from_arrays(f.grid, comps, tag="lattice_gradient")
