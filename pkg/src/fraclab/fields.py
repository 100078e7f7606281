"""Grids, sampled fields and the catalogue of analytic test functions."""

from dataclasses import dataclass, field
from math import erf, pi
import math

import numpy as np

from .constants import SUPPORTED_DIMS

FAMILIES = (
    "gaussian",
    "gaussian_derivative",
    "gaussian_dilated",
    "annulus_spectrum",
    "indicator_interval",
    "cutoff_eta",
    "besov_counterexample",
)


@dataclass(frozen=True)
class Grid:
    """Cell-centred uniform lattice on the box [-L, L]^n.

    Nodes sit at x_k = -L + (k + 1/2) h, so no node coincides with the origin.
    """

    n: int
    L: float
    N: int

    def __post_init__(self):
        if self.n not in SUPPORTED_DIMS:
            raise ValueError(f"unsupported dimension n={self.n}")
        if not self.L > 0:
            raise ValueError(f"half width must be positive, got {self.L}")
        if self.N <= 0 or self.N % 2:
            raise ValueError(f"points per axis must be a positive even integer, got {self.N}")
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self):
        return 2.0 * self.L / self.N

    @property
    def shape(self):
        return (self.N,) * self.n

    @property
    def size(self):
        return self.N ** self.n

    @property
    def cell_volume(self):
        return self.h ** self.n

    def axis(self):
        return -self.L + (np.arange(self.N) + 0.5) * self.h

    def coords(self):
        """Coordinate arrays, one per axis, each of shape ``self.shape``."""
        ax = self.axis()
        return np.meshgrid(*([ax] * self.n), indexing="ij")

    def radius(self):
        if self.n == 1:
            return np.abs(self.axis())
        x, y = self.coords()
        return np.hypot(x, y)

    def refine(self, factor=2):
        return Grid(self.n, self.L, self.N * factor)

    def enlarge(self, factor=2):
        """Same spacing, box scaled by an integer factor."""
        return Grid(self.n, self.L * factor, self.N * factor)

    def frequencies(self, pad=1):
        """DFT frequencies (cycles per unit length) of the grid zero-padded by ``pad``."""
        return np.fft.fftfreq(pad * self.N, d=self.h)


def _as_values(grid, values):
    arr = np.array(values, dtype=float)
    if arr.shape != grid.shape:
        if arr.size == grid.size:
            arr = arr.reshape(grid.shape)
        else:
            raise ValueError(f"values of shape {arr.shape} do not fit grid {grid.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid
    values: np.ndarray
    tag: str = "computed"
    singular: bool = False

    def __post_init__(self):
        vals = _as_values(self.grid, self.values)
        object.__setattr__(self, "values", vals)
        if not self.singular and not np.all(np.isfinite(vals)):
            raise ValueError(f"field '{self.tag}' has non-finite samples")

    def with_values(self, values, tag="computed"):
        return ScalarField(self.grid, values, tag=tag)

    def __add__(self, other):
        _same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, c):
        return self.with_values(float(c) * self.values)

    __rmul__ = __mul__

    def integral(self):
        return float(np.sum(self.values) * self.grid.cell_volume)

    def moment(self, axis):
        return float(np.sum(self.grid.coords()[axis] * self.values) * self.grid.cell_volume)

    def center_value(self):
        """Average over the 2^n nodes adjacent to the origin."""
        c = self.grid.N // 2
        sl = (slice(c - 1, c + 1),) * self.grid.n
        return float(np.mean(self.values[sl]))

    def embed(self, factor=2):
        """Zero-extend onto the enlarged box with the same spacing."""
        big = self.grid.enlarge(factor)
        off = (big.N - self.grid.N) // 2
        out = np.zeros(big.shape)
        out[(slice(off, off + self.grid.N),) * self.grid.n] = self.values
        return ScalarField(big, out, tag=self.tag, singular=self.singular)


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: Grid
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        for c in comps:
            if c.grid != self.grid:
                raise ValueError("all components must share one grid")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_arrays(cls, grid, arrays, tag="computed"):
        return cls(grid, tuple(ScalarField(grid, a, tag=tag) for a in arrays))

    def __getitem__(self, j):
        return self.components[j]

    def __len__(self):
        return len(self.components)

    def stack(self):
        return np.stack([c.values for c in self.components])

    def magnitude(self):
        return np.sqrt(np.sum(self.stack() ** 2, axis=0))

    def __sub__(self, other):
        if other.grid != self.grid or len(other) != len(self):
            raise ValueError("vector fields are not compatible")
        return VectorField(self.grid, tuple(a - b for a, b in zip(self.components, other.components)))

    def __add__(self, other):
        if other.grid != self.grid or len(other) != len(self):
            raise ValueError("vector fields are not compatible")
        return VectorField(self.grid, tuple(a + b for a, b in zip(self.components, other.components)))

    def __mul__(self, c):
        return VectorField(self.grid, tuple(comp * c for comp in self.components))

    __rmul__ = __mul__


def _same_grid(a, b):
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


# -- analytic families ---------------------------------------------------------


@dataclass(frozen=True)
class TestFunctionSpec:
    family: str
    params: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown test-function family '{self.family}'")

    def label(self):
        if not self.params:
            return self.family
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family}({args})"


def _center(grid, params):
    c = params.get("center", 0.0)
    c = np.broadcast_to(np.asarray(c, dtype=float), (grid.n,))
    return c


def _shifted_sq_radius(grid, params):
    c = _center(grid, params)
    return sum((x - cj) ** 2 for x, cj in zip(grid.coords(), c))


def smoothstep_eta(t):
    """Radial profile of the cut-off: 1 on [0, 1/2], 0 beyond 1, cubic in between.

    The cubic 3u^2 - 2u^3 has maximal slope 3/2 in u, i.e. exactly 3 in t.
    """
    t = np.abs(np.asarray(t, dtype=float))
    u = np.clip(2.0 * t - 1.0, 0.0, 1.0)
    return 1.0 - u * u * (3.0 - 2.0 * u)


def cutoff_eta(R, grid):
    """Sample eta_R(x) = eta(|x| / R)."""
    if not R > 0:
        raise ValueError(f"cut-off radius must be positive, got {R}")
    return ScalarField(grid, smoothstep_eta(grid.radius() / R), tag=f"cutoff_eta(R={R})")


def besov_counterexample(alpha, grid):
    """eta_1(x) |x|^{alpha-2} on a planar grid (in B^alpha_{1,inf} but not L^{2/(2-alpha)})."""
    if grid.n != 2:
        raise ValueError("the Besov counterexample is defined for n = 2 only")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    r = grid.radius()  # >= h/sqrt(2) > 0 by construction
    vals = smoothstep_eta(r) * r ** (alpha - 2.0)
    return ScalarField(grid, vals, tag=f"besov_counterexample(alpha={alpha})", singular=True)


def _annulus(grid, xi_min, xi_max, amplitude):
    if not 0.0 < xi_min < xi_max:
        raise ValueError("annulus needs 0 < xi_min < xi_max")
    nyquist = 0.5 / grid.h
    if xi_max > nyquist:
        raise ValueError(f"xi_max={xi_max} exceeds the grid Nyquist frequency {nyquist}")
    # truncated Gaussian bump in |xi|; 6 widths on either side of the centre
    centre = 0.5 * (xi_min + xi_max)
    width = (xi_max - xi_min) / 12.0
    freqs = grid.frequencies()
    mesh = np.meshgrid(*([freqs] * grid.n), indexing="ij")
    r = np.sqrt(sum(m ** 2 for m in mesh))
    bump = np.where((r >= xi_min) & (r <= xi_max), np.exp(-0.5 * ((r - centre) / width) ** 2), 0.0)
    # node k sits at -L + (k + 1/2) h: shift the synthesis accordingly
    x0 = -grid.L + 0.5 * grid.h
    phase = np.exp(2j * pi * x0 * sum(mesh))
    dxi = 1.0 / (grid.N * grid.h)
    spec = bump * phase
    vals = np.fft.ifftn(spec).real * (grid.N * dxi) ** grid.n
    return amplitude * vals


def _indicator(grid, a, b, smoothing):
    def one_axis(x):
        if smoothing > 0:
            s = float(smoothing)
            verf = np.vectorize(erf)
            return 0.5 * (verf((x - a) / s) - verf((x - b) / s))
        return ((x >= a) & (x <= b)).astype(float)

    out = np.ones(grid.shape)
    for x in grid.coords():
        out = out * one_axis(x)
    return out


def sample(spec: TestFunctionSpec, grid: Grid) -> ScalarField:
    """Sample an analytic test function on ``grid``."""
    p = dict(spec.params)
    fam = spec.family
    tag = spec.label()
    if fam == "gaussian":
        sigma = float(p.get("sigma", 1.0))
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        amp = float(p.get("amplitude", 1.0))
        if "mass" in p:
            amp = float(p["mass"]) / (sigma ** grid.n * pi ** (grid.n / 2.0))
        vals = amp * np.exp(-_shifted_sq_radius(grid, p) / sigma ** 2)
    elif fam == "gaussian_derivative":
        sigma = float(p.get("sigma", 1.0))
        axis = int(p.get("axis", 0))
        if sigma <= 0 or not 0 <= axis < grid.n:
            raise ValueError("invalid gaussian_derivative parameters")
        amp = float(p.get("amplitude", 1.0))
        c = _center(grid, p)
        xa = grid.coords()[axis] - c[axis]
        vals = amp * (-2.0 * xa / sigma ** 2) * np.exp(-_shifted_sq_radius(grid, p) / sigma ** 2)
    elif fam == "gaussian_dilated":
        # L^1-normalised dilate lambda^{-n} g(x / lambda) of e^{-|x|^2} or of its derivative
        lam = float(p.get("scale", 1.0))
        if lam <= 0:
            raise ValueError("scale must be positive")
        amp = float(p.get("amplitude", 1.0))
        coords = [x / lam for x in grid.coords()]
        g = np.exp(-sum(x ** 2 for x in coords))
        if "derivative_axis" in p:
            g = -2.0 * coords[int(p["derivative_axis"])] * g
        vals = amp * lam ** (-grid.n) * g
    elif fam == "annulus_spectrum":
        vals = _annulus(grid, float(p.get("xi_min", 0.25)), float(p.get("xi_max", 1.25)),
                        float(p.get("amplitude", 1.0)))
    elif fam == "indicator_interval":
        a, b = float(p.get("a", 0.0)), float(p.get("b", 1.0))
        if not a < b:
            raise ValueError("indicator needs a < b")
        vals = _indicator(grid, a, b, float(p.get("smoothing", 0.0)))
    elif fam == "cutoff_eta":
        return cutoff_eta(float(p.get("R", 1.0)), grid)
    elif fam == "besov_counterexample":
        return besov_counterexample(float(p.get("alpha", 0.5)), grid)
    else:  # pragma: no cover - guarded in TestFunctionSpec
        raise ValueError(fam)
    return ScalarField(grid, vals, tag=tag)


def translate(f: ScalarField, shift) -> ScalarField:
    """Return x -> f(x - y) with zero fill; ``shift`` is y in lattice steps (ints) per axis."""
    steps = np.broadcast_to(np.asarray(shift), (f.grid.n,))
    if not np.all(np.equal(np.mod(steps, 1), 0)):
        raise ValueError(f"shift {shift} is not a lattice vector")
    steps = steps.astype(int)
    out = np.zeros(f.grid.shape)
    src = []
    dst = []
    for s in steps:
        N = f.grid.N
        if abs(s) >= N:
            return ScalarField(f.grid, out, tag=f.tag, singular=f.singular)
        if s >= 0:
            src.append(slice(0, N - s))
            dst.append(slice(s, N))
        else:
            src.append(slice(-s, N))
            dst.append(slice(0, N + s))
    out[tuple(dst)] = f.values[tuple(src)]
    return ScalarField(f.grid, out, tag=f.tag, singular=f.singular)


def translate_by(f, y):
    """Translate by a physical vector y, which must be a multiple of h per axis."""
    steps = np.broadcast_to(np.asarray(y, dtype=float), (f.grid.n,)) / f.grid.h
    rounded = np.round(steps)
    if not np.allclose(steps, rounded, rtol=0, atol=1e-9):
        raise ValueError(f"shift {y} is not a multiple of the grid spacing {f.grid.h}")
    return translate(f, rounded.astype(int))


# -- serialisation ---------------------------------------------------------------


def _fmt(v):
    return "%.17g" % v


def write_field_csv(f, path):
    """Write a ScalarField or VectorField in the row-major ``index,value`` format."""
    grid = f.grid
    if isinstance(f, VectorField):
        cols = [c.values.ravel() for c in f.components]
    else:
        cols = [f.values.ravel()]
    lines = [f"# {grid.n},{_fmt(grid.L)},{grid.N}"]
    for i in range(grid.size):
        lines.append(",".join([str(i)] + [_fmt(c[i]) for c in cols]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_field_csv(path):
    """Inverse of :func:`write_field_csv`; returns a ScalarField or VectorField."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError(f"{path}: missing '# n,L,N' header")
        n, L, N = header[1:].strip().split(",")
        grid = Grid(int(n), float(L), int(N))
        rows = [line.strip().split(",") for line in fh if line.strip()]
    if len(rows) != grid.size:
        raise ValueError(f"{path}: expected {grid.size} rows, found {len(rows)}")
    data = np.array([[float(v) for v in r[1:]] for r in rows])
    if data.shape[1] == 1:
        return ScalarField(grid, data[:, 0].reshape(grid.shape), tag="file", singular=True)
    return VectorField(grid, tuple(ScalarField(grid, data[:, j].reshape(grid.shape), tag="file")
                                   for j in range(data.shape[1])))


def boundary_mass_fraction(values, frame=0.05):
    """Fraction of the L^1 mass sitting in the outer ``frame`` of the box (per axis)."""
    v = np.abs(np.asarray(values))
    total = v.sum()
    if total == 0:
        return 0.0
    N = v.shape[0]
    w = max(1, int(math.ceil(frame * N)))
    inner = v[(slice(w, N - w),) * v.ndim].sum()
    return float((total - inner) / total)
