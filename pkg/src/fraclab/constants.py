"""Normalisation constants for the fractional operators.

All functions are pure and cheap; dimensions are restricted to n in {1, 2}.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

SUPPORTED_DIMS = (1, 2)

# Lanczos approximation, g = 7, nine coefficients
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _check_dim(n):
    if n not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension n={n}; expected one of {SUPPORTED_DIMS}")


def _lanczos(x):
    # valid for x >= 0.5
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def gamma_fn(x: float) -> float:
    """Euler Gamma function for x > 0."""
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise ValueError(f"gamma_fn requires a finite positive argument, got {x}")
    if 2.0 * x == int(2.0 * x) and x <= 100.0:
        # integers and half-integers by the recurrence from Gamma(1) or Gamma(1/2): exact to rounding
        k = int(x - 0.5) if x != int(x) else int(x) - 1
        acc = math.sqrt(math.pi) if x != int(x) else 1.0
        for j in range(k):
            acc *= (x - k + j)
        return acc
    if x < 0.5:
        # reflection keeps the Lanczos sum in its accurate range
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    return _lanczos(x)


def _gamma_neg_half(a):
    """Gamma(-a/2) for a in (0, 2); negative."""
    return gamma_fn(1.0 - a / 2.0) / (-a / 2.0)


def omega(n: int) -> float:
    """Lebesgue measure of the unit ball in R^n."""
    _check_dim(n)
    return math.pi ** (n / 2.0) / gamma_fn((n + 2) / 2.0)


def riesz_norm_const(n: int) -> float:
    """Prefactor pi^{-(n+1)/2} Gamma((n+1)/2) of the Riesz transform kernel."""
    _check_dim(n)
    return math.pi ** (-(n + 1) / 2.0) * gamma_fn((n + 1) / 2.0)


def mu(n: int, alpha: float) -> float:
    """Constant in front of the fractional gradient kernel.

    mu(n, 1) is defined as 0 (1/Gamma has a zero at the origin).
    """
    _check_dim(n)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"mu requires alpha in [0, 1], got {alpha}")
    if alpha == 1.0:
        return 0.0
    return (
        2.0 ** alpha
        * math.pi ** (-n / 2.0)
        * gamma_fn((n + alpha + 1) / 2.0)
        / gamma_fn((1 - alpha) / 2.0)
    )


def nu(n: int, alpha: float) -> float:
    """Fractional Laplacian constant; negative on (0, 1)."""
    _check_dim(n)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"nu requires alpha in (0, 1), got {alpha}")
    return 2.0 ** alpha * math.pi ** (-n / 2.0) * gamma_fn((n + alpha) / 2.0) / _gamma_neg_half(alpha)


def riesz_potential_const(n: int, alpha: float) -> float:
    """Prefactor of the Riesz potential kernel |x|^{alpha-n}, alpha in (0, n)."""
    _check_dim(n)
    if not 0.0 < alpha < n:
        raise ValueError(f"Riesz potential order must lie in (0, {n}), got {alpha}")
    return 2.0 ** (-alpha) * math.pi ** (-n / 2.0) * gamma_fn((n - alpha) / 2.0) / gamma_fn(alpha / 2.0)


def mu_near_one_ratio(n: int, alpha: float) -> float:
    """mu(n, alpha) * omega(n) / (1 - alpha); tends to 1 as alpha -> 1."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return mu(n, alpha) * omega(n) / (1.0 - alpha)


def uniform_bound_const(n: int, p: float) -> float:
    """The constant c_{n,p} of the uniform estimate for the fractional gradient."""
    _check_dim(n)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    sphere = n * omega(n)
    if math.isinf(p):
        return sphere
    if p == 1:
        return max(sphere, 1.0)
    q = 1.0 - 1.0 / p
    return max(sphere, sphere ** q * q ** q)


@dataclass(frozen=True)
class ConstantsTable:
    n: int
    omega: float
    mu0: float
    riesz_norm_const: float

    @classmethod
    @lru_cache(maxsize=None)
    def for_dim(cls, n):
        return cls(n=n, omega=omega(n), mu0=mu(n, 0.0), riesz_norm_const=riesz_norm_const(n))

    @property
    def energy_limit_factor(self):
        """n * omega_n * mu_{n,0}: multiplies |int f| in the alpha -> 0 energy limit."""
        return self.n * self.omega * self.mu0
