"""Lattice zeta constants used by the corrected lattice quadrature.

For a kernel s homogeneous of degree gamma > -n and a smooth g, the punctured
lattice sum obeys a generalised Euler-Maclaurin expansion

    h^n sum_{k != 0} s(kh) g(kh) = int s g + sum_a h^{n+gamma+|a|} d^a g(0)/a! Z[s z^a]

where Z[.] is the analytic continuation of the punctured lattice sum.  For the
radial pieces needed here everything reduces to the Epstein zeta function of
the integer lattice, Z_n(s) = sum_{k in Z^n, k != 0} |k|^{-s}.
"""

from functools import lru_cache

import mpmath

_BETA_CHARACTER = [0, 1, 0, -1]


@lru_cache(maxsize=None)
def epstein_zeta(n: int, s: float) -> float:
    """Z_n(s), analytically continued in s.

    n = 1: 2 zeta(s).  n = 2: 4 zeta(s/2) beta(s/2) with beta the Dirichlet
    beta function (sum of two squares).  Poles at s = n.
    """
    s = mpmath.mpf(s)
    if n == 1:
        if s == 1:
            raise ValueError("Z_1 has a pole at s = 1")
        return float(2 * mpmath.zeta(s))
    if n == 2:
        if s == 2:
            raise ValueError("Z_2 has a pole at s = 2")
        t = s / 2
        return float(4 * mpmath.zeta(t) * mpmath.dirichlet(t, _BETA_CHARACTER))
    raise ValueError(f"unsupported dimension n={n}")


def odd_gradient_zeta(n, order):
    """Z[z_j z_j |z|^{-(n+order+1)}] = Z_n(n + order - 1) / n.

    Leading correction coefficient for odd kernels z |z|^{-(n+order+1)}.
    """
    return epstein_zeta(n, n + order - 1.0) / n


def even_hessian_zeta(n, degree):
    """Z[z_j z_j |z|^{-degree}] = Z_n(degree - 2) / n, for a radial kernel |z|^{-degree}."""
    return epstein_zeta(n, degree - 2.0) / n


@lru_cache(maxsize=None)
def abs_direction_factor(n):
    """Mean of |omega . e| over unit directions omega (isotropic surrogate)."""
    return 1.0 if n == 1 else 2.0 / float(mpmath.pi)


def centred_epstein_zeta(n, s):
    """sum over the half-shifted lattice (Z + 1/2)^n of |k|^{-s}, continued in s.

    The odd-odd sublattice is the checkerboard lattice minus the even one, so
    this is (2^s - 1) Z_1(s) for n = 1 and (2^{s/2} - 1) Z_2(s) for n = 2.
    """
    scale = 2.0 ** s if n == 1 else 2.0 ** (s / 2.0)
    return (scale - 1.0) * epstein_zeta(n, s)
