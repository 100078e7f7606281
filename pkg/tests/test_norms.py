import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraclab import constants, norms
from fraclab.fields import Grid, ScalarField, TestFunctionSpec, VectorField, besov_counterexample, sample

G1 = Grid(1, 12.0, 1024)
SMALL = Grid(1, 6.0, 128)


def spec(family, grid=G1, **p):
    return sample(TestFunctionSpec(family, p), grid)


def zero(grid=G1):
    return ScalarField(grid, np.zeros(grid.shape))


def test_lp_anchors():
    ind = spec("indicator_interval", a=0.0, b=1.0)
    assert norms.lp_norm(ind, 1) == pytest.approx(1.0, abs=G1.h)
    assert norms.lp_norm(zero(), 2) == 0.0
    assert norms.lp_norm(spec("gaussian"), 2) == pytest.approx((math.pi / 2) ** 0.25, rel=1e-6)
    assert norms.lp_norm(spec("gaussian"), math.inf) == pytest.approx(math.exp(-(G1.h / 2) ** 2))
    with pytest.raises(ValueError):
        norms.lp_norm(ind, 0.5)


def test_lp_vector_uses_magnitude():
    g = Grid(2, 3.0, 16)
    a = spec("gaussian", g)
    v = VectorField(g, (a * 3.0, a * 4.0))
    assert norms.lp_norm(v, 2) == pytest.approx(5.0 * norms.lp_norm(a, 2), rel=1e-14)


def test_gagliardo_indicator_closed_form():
    # dyadic box: the interval ends sit on cell faces
    ind = spec("indicator_interval", Grid(1, 8.0, 2048), a=0.0, b=1.0)
    assert norms.gagliardo_seminorm(ind, 0.5, 1) == pytest.approx(16.0, rel=0.05)
    a = 0.02
    assert a * norms.gagliardo_seminorm(ind, a, 1) == pytest.approx(4 / (1 - a), rel=0.05)
    assert norms.gagliardo_seminorm(zero(), 0.5, 2) == 0.0
    with pytest.raises(ValueError):
        norms.gagliardo_seminorm(ind, 1.0, 1)


@pytest.mark.parametrize("s", [0.1, 0.25, 0.45])
def test_gagliardo_gaussian_p2_closed_form(s):
    # [f]^2_{W^{s,2}} = (2 / |nu_{1,2s}|) ||(-Delta)^{s/2} f||_2^2 and, for e^{-x^2},
    # ||(-Delta)^{s/2} f||_2^2 = int |2 pi xi|^{2s} pi e^{-2 pi^2 xi^2} d xi = 2^{s-1/2} Gamma(s+1/2)
    exact = 2.0 / abs(constants.nu(1, 2 * s)) * 2 ** (s - 0.5) * math.gamma(s + 0.5)
    f = spec("gaussian")
    assert norms.gagliardo_seminorm(f, s, 2) ** 2 == pytest.approx(exact, rel=1e-2)


def test_hardy_norm():
    gd = norms.hardy_norm(spec("gaussian_derivative"))
    assert math.isfinite(gd.value) and abs(gd.growth) <= 0.05
    g = norms.hardy_norm(spec("gaussian"))
    assert g.growth >= 0.10
    assert float(norms.hardy_norm(zero())) == 0.0


def test_besov_indicator_and_zero():
    ind = spec("indicator_interval", Grid(1, 8.0, 1024), a=0.0, b=1.0)
    assert norms.besov_sup_seminorm(ind, 0.5) == pytest.approx(2.0, rel=0.05)
    assert norms.besov_sup_seminorm(zero(), 0.5) == 0.0


@pytest.mark.parametrize("alpha", [0.25, 0.5])
def test_besov_counterexample_stable(alpha):
    vals = [norms.besov_sup_seminorm(besov_counterexample(alpha, Grid(2, 16.0, N)), alpha, singular_order=2 - alpha)
            for N in (128, 256)]
    assert abs(vals[1] / vals[0] - 1) <= 0.10


def test_translation_difference_matches_translate():
    from fraclab.fields import translate
    f = spec("gaussian")
    for k in (1, 7, -5):
        direct = norms.lp_norm(translate(f, -k) - f, 1)
        assert norms.translation_difference(f, k, 1) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_translation_slope_at_small_shifts(alpha):
    f = spec("gaussian")
    steps = np.array([1, 2, 4, 8])
    d = [norms.translation_difference(f, int(s), 1) for s in steps]
    slope = np.polyfit(np.log(steps * G1.h), np.log(d), 1)[0]
    assert slope >= alpha - 0.05


def test_frac_variation():
    f = spec("gaussian")
    assert norms.frac_variation(zero(), 0.5) == 0.0
    assert norms.frac_variation(f, 0.999) == pytest.approx(2.0, rel=0.02)
    assert norms.frac_variation(f, 0.5) <= constants.mu(1, 0.5) * norms.gagliardo_seminorm(f, 0.5, 1)
    with pytest.raises(ValueError):
        norms.frac_variation(besov_counterexample(0.5, Grid(2, 4.0, 32)), 0.5)


def test_far_field_factor_matches_quadrature():
    n1 = norms.far_field_factor(1, 3.0, 0.4)
    assert n1 == pytest.approx(2 * 3.0 ** -0.4 / 0.4)
    # n = 2: integrate |x|^{-2-a} outside the square [-L, L]^2 in polar coordinates
    L, a = 2.0, 0.3
    th = np.linspace(0, 2 * np.pi, 200001)[:-1]
    rmin = L / np.maximum(np.abs(np.cos(th)), np.abs(np.sin(th)))
    ref = np.mean(rmin ** -a / a) * 2 * np.pi
    assert norms.far_field_factor(2, L, a) == pytest.approx(ref, rel=1e-6)


def test_holder():
    g = Grid(1, 1.0, 64)
    absx = ScalarField(g, np.abs(g.axis()))
    assert norms.holder_seminorm(absx, 1.0) == pytest.approx(1.0, rel=1e-12)
    c = ScalarField(g, np.full(g.shape, 2.0))
    assert norms.holder_seminorm(c, 0.5) == 0.0
    f = spec("gaussian")
    v = norms.holder_seminorm(f, 0.5, window=4.0)
    assert math.isfinite(v) and v > 0
    with pytest.raises(ValueError):
        norms.holder_seminorm(f, 0.5, window=G1.h / 4)


# -- properties on random fields ----------------------------------------------

def _smooth_field(coefs, grid=SMALL):
    """Sum of narrow Gaussians with the given (amplitude, centre) pairs: decays inside the box."""
    x = grid.axis()
    vals = sum(a * np.exp(-((x - c) / 0.6) ** 2) for a, c in coefs)
    return ScalarField(grid, vals)


coef = st.tuples(st.floats(-2, 2, allow_nan=False), st.floats(-1.5, 1.5, allow_nan=False))
fields = st.lists(coef, min_size=1, max_size=4).map(_smooth_field)
scalars = st.floats(-5, 5, allow_nan=False).filter(lambda c: abs(c) > 1e-3)

NORMS = {
    "lp1": lambda f: norms.lp_norm(f, 1),
    "lp2": lambda f: norms.lp_norm(f, 2),
    "sup": lambda f: norms.lp_norm(f, math.inf),
    "gagliardo": lambda f: norms.gagliardo_seminorm(f, 0.4, 1),
    "gagliardo_p": lambda f: norms.gagliardo_seminorm(f, 0.3, 1.5),
    "besov": lambda f: norms.besov_sup_seminorm(f, 0.5),
    "holder": lambda f: norms.holder_seminorm(f, 0.5),
    "hardy": lambda f: norms.hardy_norm(f, diagnose=False).value,
    "frac_variation": lambda f: norms.frac_variation(f, 0.5),
}


@pytest.mark.parametrize("name", sorted(NORMS))
@settings(max_examples=20, deadline=None)
@given(f=fields, c=scalars)
def test_absolute_homogeneity(name, f, c):
    N = NORMS[name]
    base = N(f)
    assert N(f * c) == pytest.approx(abs(c) * base, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("name", sorted(NORMS))
@settings(max_examples=20, deadline=None)
@given(f=fields, g=fields)
def test_triangle_inequality(name, f, g):
    N = NORMS[name]
    assert N(f + g) <= (N(f) + N(g)) * (1 + 1e-12) + 1e-12
