import math

import numpy as np
import pytest

from fraclab.fields import (Grid, ScalarField, TestFunctionSpec, VectorField, besov_counterexample,
                            boundary_mass_fraction, cutoff_eta, read_field_csv, sample, smoothstep_eta,
                            translate, translate_by, write_field_csv)
from fraclab.norms import lp_norm


def spec(family, **p):
    return TestFunctionSpec(family, p)


@pytest.mark.parametrize("n, N", [(1, 16), (1, 1024), (2, 32)])
def test_grid_is_cell_centred(n, N):
    g = Grid(n, 3.0, N)
    assert g.h == pytest.approx(6.0 / N)
    assert g.size == N ** n
    assert np.min(g.radius()) >= g.h / 2 - 1e-15


@pytest.mark.parametrize("args", [(3, 1.0, 8), (1, 0.0, 8), (1, 1.0, 7), (1, 1.0, 0)])
def test_grid_rejects(args):
    with pytest.raises(ValueError):
        Grid(*args)


def test_gaussian_samples():
    g = Grid(1, 6.0, 64)
    f = sample(spec("gaussian"), g)
    np.testing.assert_array_equal(f.values, np.exp(-g.axis() ** 2))


@pytest.mark.parametrize("n", [1, 2])
def test_zero_mean_families(n):
    g = Grid(n, 12.0 if n == 1 else 6.0, 256 if n == 1 else 64)
    gd = sample(spec("gaussian_derivative"), g)
    assert abs(gd.integral()) <= 1e-10
    an = sample(spec("annulus_spectrum"), g)
    l1 = lp_norm(an, 1)
    assert abs(an.integral()) <= 1e-8 * l1
    for j in range(n):
        assert abs(an.moment(j)) <= 1e-6 * g.L * l1


def test_indicator_values():
    f = sample(spec("indicator_interval", a=0.0, b=1.0), Grid(1, 4.0, 128))
    assert set(np.unique(f.values)) <= {0.0, 1.0}
    assert lp_norm(f, 1) == pytest.approx(1.0, abs=f.grid.h)


def test_unknown_family_and_bad_params():
    with pytest.raises(ValueError):
        TestFunctionSpec("nope")
    with pytest.raises(ValueError):
        sample(spec("gaussian", sigma=-1.0), Grid(1, 1.0, 8))
    with pytest.raises(ValueError):
        sample(spec("indicator_interval", a=1.0, b=0.0), Grid(1, 1.0, 8))
    with pytest.raises(ValueError):
        sample(spec("annulus_spectrum", xi_max=100.0), Grid(1, 1.0, 8))


def test_cutoff_eta_profile():
    assert smoothstep_eta(0.25) == 1.0
    assert smoothstep_eta(1.1) == 0.0
    g = Grid(1, 2.0, 4096)
    eta = cutoff_eta(1.0, g)
    assert 0.0 <= eta.values.min() and eta.values.max() <= 1.0
    slope = np.max(np.abs(np.diff(eta.values))) / g.h
    assert slope <= 3.0 + 10 * g.h
    with pytest.raises(ValueError):
        cutoff_eta(0.0, g)


def test_besov_counterexample_values():
    g = Grid(2, 4.0, 32)  # h = 0.25: nodes at (+-0.125, +-0.125), ...
    f = besov_counterexample(0.5, g)
    assert f.singular
    r = g.radius()
    k = np.argmin(np.abs(r - math.hypot(0.125, 0.125)))
    assert f.values.ravel()[k] == pytest.approx(r.ravel()[k] ** -1.5)
    assert np.all(f.values[r >= 1.0] == 0.0)
    with pytest.raises(ValueError):
        besov_counterexample(0.5, Grid(1, 4.0, 32))


def test_besov_counterexample_exact_point():
    # a grid with a node at |x| = 0.25 on the axis: h = 0.5, node at x = 0.25
    g = Grid(2, 4.0, 16)
    f = besov_counterexample(0.5, g)
    c = g.N // 2
    x, y = g.coords()
    assert (x[c, c], y[c, c]) == (0.25, 0.25)
    rr = math.hypot(0.25, 0.25)
    assert f.values[c, c] == pytest.approx(rr ** -1.5)


def test_translate():
    g = Grid(1, 6.0, 64)
    f = sample(spec("gaussian"), g)
    np.testing.assert_array_equal(translate(f, 0).values, f.values)
    t = translate(f, 1).values
    np.testing.assert_allclose(t[1:], np.exp(-(g.axis()[1:] - g.h) ** 2), rtol=1e-15)
    assert t[0] == 0.0
    with pytest.raises(ValueError):
        translate(f, 0.5)
    with pytest.raises(ValueError):
        translate_by(f, 0.3 * g.h)


def test_translate_indicator_l1():
    g = Grid(1, 4.0, 1280)  # h = 1/160, so 0.1 = 16 h
    f = sample(spec("indicator_interval", a=0.0, b=1.0), g)
    d = translate_by(f, 0.1) - f
    assert lp_norm(d, 1) == pytest.approx(0.2, rel=1e-12)


def test_field_invariants():
    g = Grid(1, 1.0, 4)
    with pytest.raises(ValueError):
        ScalarField(g, [0.0, np.nan, 0.0, 0.0])
    ScalarField(g, [0.0, np.inf, 0.0, 0.0], singular=True)
    with pytest.raises(ValueError):
        ScalarField(g, [0.0, 1.0])
    other = ScalarField(Grid(1, 2.0, 4), np.zeros(4))
    with pytest.raises(ValueError):
        VectorField(g, (ScalarField(g, np.zeros(4)), other))


def test_embed_preserves_samples():
    f = sample(spec("gaussian"), Grid(2, 3.0, 16))
    big = f.embed(2)
    assert big.grid == Grid(2, 6.0, 32)
    assert big.integral() == pytest.approx(f.integral(), rel=1e-15)


@pytest.mark.parametrize("n", [1, 2])
def test_csv_roundtrip_bit_exact(tmp_path, n):
    g = Grid(n, 3.0, 8)
    f = sample(spec("gaussian_derivative", sigma=0.7), g)
    path = tmp_path / "f.csv"
    write_field_csv(f, path)
    back = read_field_csv(path)
    np.testing.assert_array_equal(back.values, f.values)
    assert path.read_text().splitlines()[0] == f"# {n},3,8"
    v = VectorField(g, (f, -f))
    write_field_csv(v, tmp_path / "v.csv")
    vb = read_field_csv(tmp_path / "v.csv")
    np.testing.assert_array_equal(vb.stack(), v.stack())


def test_boundary_mass_fraction():
    assert boundary_mass_fraction(np.zeros(10)) == 0.0
    assert boundary_mass_fraction(np.ones(100)) == pytest.approx(0.1)
