"""Zero-padded FFT realisation of the Fourier multipliers.

Convention: f^(xi) = int f(x) e^{-2 pi i x.xi} dx, so (-Delta)^{a/2} has
symbol (2 pi |xi|)^a.  A field is zero-padded to pad * N points per axis,
transformed, multiplied by the symbol (or by the product of several symbols,
so compositions see a single crop), transformed back and cropped.
"""

from dataclasses import dataclass
import itertools
import math
import warnings

import numpy as np

from .fields import ScalarField, VectorField, boundary_mass_fraction

KINDS = (
    "riesz_component",
    "frac_laplacian",
    "riesz_potential",
    "frac_gradient_component",
    "bessel_ratio",
    "identity_plus_frac_laplacian",
)
PADS = (2, 4, 8)
DEFAULT_PAD = 4
DEFAULT_TAIL_THRESHOLD = 1e-6


class DCBinWarning(UserWarning):
    """The zero-frequency bin of a non-integrable symbol was dropped on a field with nonzero mean."""


@dataclass(frozen=True)
class MultiplierSpec:
    kind: str
    alpha: float = 0.0
    beta: float = 0.0
    j: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown multiplier kind '{self.kind}'")
        a = self.alpha
        if self.kind == "frac_gradient_component" and not 0.0 <= a <= 1.0:
            raise ValueError(f"fractional gradient order must lie in [0, 1], got {a}")
        if self.kind in ("frac_laplacian", "identity_plus_frac_laplacian", "bessel_ratio") and a < 0:
            raise ValueError(f"order must be non-negative, got {a}")
        if self.kind == "riesz_potential" and not a > 0:
            raise ValueError(f"Riesz potential order must be positive, got {a}")
        if self.kind == "bessel_ratio" and not 0.0 <= self.beta <= a:
            raise ValueError("bessel_ratio needs 0 <= beta <= alpha")

    # constructors
    @classmethod
    def riesz(cls, j):
        return cls("riesz_component", j=j)

    @classmethod
    def laplacian(cls, alpha):
        return cls("frac_laplacian", alpha=alpha)

    @classmethod
    def potential(cls, alpha):
        return cls("riesz_potential", alpha=alpha)

    @classmethod
    def gradient(cls, alpha, j):
        return cls("frac_gradient_component", alpha=alpha, j=j)

    @classmethod
    def bessel(cls, alpha, beta):
        return cls("bessel_ratio", alpha=alpha, beta=beta)

    @classmethod
    def identity_plus(cls, alpha):
        return cls("identity_plus_frac_laplacian", alpha=alpha)

    def symbol(self, xi):
        """Evaluate the symbol on a list of frequency meshes (one per axis).

        The xi = 0 bin takes the limit value where it is finite (1 for
        Id + (-Delta)^{a/2} and for bessel_ratio with beta = 0) and 0 otherwise.
        """
        rho = 2.0 * math.pi * np.sqrt(sum(x * x for x in xi))
        dc = rho == 0
        safe = np.where(dc, 1.0, rho)
        k, a, b = self.kind, self.alpha, self.beta
        if k in ("riesz_component", "frac_gradient_component"):
            if self.j >= len(xi):
                raise ValueError(f"component {self.j} out of range for n={len(xi)}")
            order = 0.0 if k == "riesz_component" else a
            s = 1j * (2.0 * math.pi * xi[self.j]) * safe ** (order - 1.0)
            return np.where(dc, 0.0, s)
        if k == "frac_laplacian":
            return np.where(dc, 0.0, safe ** a) if a > 0 else np.ones_like(rho)
        if k == "riesz_potential":
            return np.where(dc, 0.0, safe ** (-a))
        if k == "bessel_ratio":
            s = safe ** b / (1.0 + safe ** a)
            return np.where(dc, 1.0 if b == 0 else 0.0, s)
        # identity_plus_frac_laplacian
        return np.where(dc, 1.0, 1.0 + safe ** a)


def _as_specs(m):
    if isinstance(m, MultiplierSpec):
        return (m,)
    specs = tuple(m)
    if not specs or not all(isinstance(s, MultiplierSpec) for s in specs):
        raise TypeError("expected a MultiplierSpec or a non-empty sequence of them")
    return specs


def _check_input(f, pad, tail_threshold):
    if pad not in PADS:
        raise ValueError(f"pad must be one of {PADS}, got {pad}")
    frac = boundary_mass_fraction(f.values)
    if frac > tail_threshold:
        raise ValueError(
            f"field '{f.tag}' carries {frac:.2e} of its mass in the outer frame "
            f"(threshold {tail_threshold:.1e}); refusing to transform an aliasing hazard"
        )


def _dc_guard(f, specs):
    n = f.grid.n
    if not any(s.kind == "riesz_potential" and s.alpha >= n / 2.0 for s in specs):
        return
    l1 = float(np.sum(np.abs(f.values)) * f.grid.cell_volume)
    if l1 > 0 and abs(f.integral()) > DEFAULT_TAIL_THRESHOLD * l1:
        warnings.warn(
            f"Riesz potential with order >= n/2 on a field of nonzero mean ({f.integral():.3e}); "
            "the dropped zero-frequency bin makes the result box-dependent",
            DCBinWarning,
            stacklevel=3,
        )


def _rfreqs(grid, pad):
    M = pad * grid.N
    full = np.fft.fftfreq(M, d=grid.h)
    half = np.fft.rfftfreq(M, d=grid.h)
    axes = [full] * (grid.n - 1) + [half]
    return np.meshgrid(*axes, indexing="ij")


def _transform(values, grid, pad):
    M = pad * grid.N
    return np.fft.rfftn(values, s=(M,) * grid.n, axes=tuple(range(grid.n)))


def _inverse(spec, grid, pad):
    M = pad * grid.N
    out = np.fft.irfftn(spec, s=(M,) * grid.n, axes=tuple(range(grid.n)))
    return out[(slice(0, grid.N),) * grid.n]


def apply_multiplier(f: ScalarField, m, pad: int = DEFAULT_PAD, tail_threshold: float = DEFAULT_TAIL_THRESHOLD) -> ScalarField:
    """Apply a multiplier, or the product of a sequence of them, to a scalar field."""
    specs = _as_specs(m)
    _check_input(f, pad, tail_threshold)
    _dc_guard(f, specs)
    xi = _rfreqs(f.grid, pad)
    sym = np.ones(xi[0].shape, dtype=complex)
    for s in specs:
        sym = sym * s.symbol(xi)
    out = _inverse(_transform(f.values, f.grid, pad) * sym, f.grid, pad)
    tag = "*".join(f"{s.kind}({s.alpha:g},{s.beta:g},{s.j})" for s in specs)
    return ScalarField(f.grid, out, tag=tag)


def _apply_each(f, specs_per_component, pad, tail_threshold):
    """Several multipliers on one field, sharing the forward transform."""
    _check_input(f, pad, tail_threshold)
    for specs in specs_per_component:
        _dc_guard(f, specs)
    xi = _rfreqs(f.grid, pad)
    fh = _transform(f.values, f.grid, pad)
    comps = []
    for specs in specs_per_component:
        sym = np.ones(xi[0].shape, dtype=complex)
        for s in specs:
            sym = sym * s.symbol(xi)
        comps.append(_inverse(fh * sym, f.grid, pad))
    return comps


def spectral_nabla(f: ScalarField, alpha: float, pad: int = DEFAULT_PAD, then=(),
                   tail_threshold: float = DEFAULT_TAIL_THRESHOLD) -> VectorField:
    """Fractional gradient R (-Delta)^{alpha/2}; alpha = 0 is R, alpha = 1 the gradient.

    ``then`` is an optional sequence of scalar multipliers applied to every
    component before the crop.
    """
    extra = _as_specs(then) if then else ()
    specs = [(MultiplierSpec.gradient(alpha, j),) + extra for j in range(f.grid.n)]
    comps = _apply_each(f, specs, pad, tail_threshold)
    return VectorField.from_arrays(f.grid, comps, tag=f"spectral_nabla(alpha={alpha})")


def spectral_div(phi: VectorField, alpha: float, pad: int = DEFAULT_PAD,
                 tail_threshold: float = DEFAULT_TAIL_THRESHOLD) -> ScalarField:
    """Fractional divergence: sum_j of the gradient symbol applied to component j."""
    if len(phi) != phi.grid.n:
        raise ValueError("vector field must have n components")
    total = np.zeros(phi.grid.shape)
    for j, comp in enumerate(phi.components):
        total = total + apply_multiplier(comp, MultiplierSpec.gradient(alpha, j), pad, tail_threshold).values
    return ScalarField(phi.grid, total, tag=f"spectral_div(alpha={alpha})")


def spectral_riesz(f: ScalarField, pad: int = DEFAULT_PAD, tail_threshold: float = DEFAULT_TAIL_THRESHOLD) -> VectorField:
    specs = [(MultiplierSpec.riesz(j),) for j in range(f.grid.n)]
    return VectorField.from_arrays(f.grid, _apply_each(f, specs, pad, tail_threshold), tag="spectral_riesz")


def spectral_frac_laplacian(f, alpha, pad=DEFAULT_PAD, tail_threshold=DEFAULT_TAIL_THRESHOLD):
    return apply_multiplier(f, MultiplierSpec.laplacian(alpha), pad, tail_threshold)


def spectral_riesz_potential(f, alpha, pad=DEFAULT_PAD, tail_threshold=DEFAULT_TAIL_THRESHOLD):
    if not 0.0 < alpha < f.grid.n:
        raise ValueError(f"Riesz potential order must lie in (0, {f.grid.n}), got {alpha}")
    return apply_multiplier(f, MultiplierSpec.potential(alpha), pad, tail_threshold)


def spectral_gradient(f, pad=DEFAULT_PAD, tail_threshold=DEFAULT_TAIL_THRESHOLD):
    """Classical gradient by spectral differentiation."""
    return spectral_nabla(f, 1.0, pad, tail_threshold=tail_threshold)


# -- Mihlin-Hormander norm of m(xi) = |xi|^beta / (1 + |xi|^alpha) ----------------


def default_xi_grid(points_per_decade=20):
    """Log-spaced radii spanning [1e-4, 1e4]."""
    return np.logspace(-4.0, 4.0, 8 * points_per_decade + 1)


def _mihlin_symbol(alpha, beta):
    def m(*xi):
        r = np.sqrt(sum(x * x for x in xi))
        return r ** beta / (1.0 + r ** alpha)
    return m


def _directions(n, count=16):
    if n == 1:
        return np.ones((1, 1))
    # the symbol is radial, so one quadrant of directions is enough
    th = (np.arange(count) + 0.5) * (0.5 * math.pi / count)
    return np.stack([np.cos(th), np.sin(th)], axis=1)


def _fd_partial(m, point, a, step):
    """Central finite difference of order a (a multi-index) at ``point``."""
    offsets = {0: [(0, 1.0)], 1: [(-1, -0.5), (1, 0.5)], 2: [(-1, 1.0), (0, -2.0), (1, 1.0)]}
    total = 0.0
    for combo in itertools.product(*[offsets[ai] for ai in a]):
        coef = 1.0
        pt = []
        for (o, c), x in zip(combo, point):
            coef *= c
            pt.append(x + o * step)
        total = total + coef * m(*pt)
    return total / step ** sum(a)


def mihlin_norm_estimate(alpha, beta, xi_grid=None, fd_step=1e-3, n=1):
    """max over |a| <= floor(n/2) + 1 and sampled xi of |xi^a d^a m(xi)|."""
    if not 0.0 <= beta <= alpha <= 1.0:
        raise ValueError(f"need 0 <= beta <= alpha <= 1, got alpha={alpha}, beta={beta}")
    if n not in (1, 2):
        raise ValueError(f"unsupported dimension n={n}")
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    radii = default_xi_grid() if xi_grid is None else np.asarray(xi_grid, dtype=float)
    m = _mihlin_symbol(alpha, beta)
    order = n // 2 + 1
    indices = [a for a in itertools.product(range(order + 1), repeat=n) if sum(a) <= order]
    best = 0.0
    for d in _directions(n):
        point = [d[i] * radii for i in range(n)]
        step = fd_step * radii
        for a in indices:
            mono = np.ones_like(radii)
            for x, ai in zip(point, a):
                mono = mono * np.abs(x) ** ai
            val = np.max(np.abs(mono * _fd_partial(m, point, a, step)))
            best = max(best, float(val))
    return best
