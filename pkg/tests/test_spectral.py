import math
import warnings

import numpy as np
import pytest

from fraclab import spectral
from fraclab.fields import Grid, ScalarField, TestFunctionSpec, VectorField, sample
from fraclab.norms import lp_norm
from fraclab.spectral import MultiplierSpec as M

G1 = Grid(1, 12.0, 1024)
G2 = Grid(2, 6.0, 64)


def spec(family, grid=G1, **p):
    return sample(TestFunctionSpec(family, p), grid)


def rel_l2(a, b):
    return lp_norm(a - b, 2) / lp_norm(b, 2)


def test_multiplier_validation():
    with pytest.raises(ValueError):
        M("bogus")
    with pytest.raises(ValueError):
        M.gradient(1.5, 0)
    with pytest.raises(ValueError):
        M.potential(0.0)
    with pytest.raises(ValueError):
        M.bessel(0.3, 0.5)


def test_dc_bin_values():
    xi = [np.array([0.0, 0.5])]
    assert M.identity_plus(0.5).symbol(xi)[0] == 1.0
    assert M.bessel(0.5, 0.0).symbol(xi)[0] == 1.0
    for m in (M.riesz(0), M.gradient(0.5, 0), M.laplacian(0.5), M.potential(0.5), M.bessel(0.5, 0.2)):
        assert m.symbol(xi)[0] == 0.0


@pytest.mark.parametrize("m", [M.laplacian(0.5), M.riesz(0), M.potential(0.3), M.bessel(0.6, 0.2)])
def test_zero_field_maps_to_zero(m):
    z = ScalarField(G1, np.zeros(G1.shape))
    assert np.all(spectral.apply_multiplier(z, m).values == 0.0)


@pytest.mark.parametrize("pad", [2, 4, 8])
def test_identity_multiplier_roundtrip(pad):
    f = spec("gaussian")
    out = spectral.apply_multiplier(f, M.laplacian(0.0), pad=pad)
    assert abs(lp_norm(out, 2) / lp_norm(f, 2) - 1) <= 1e-12


def test_bad_pad_and_tail_refusal():
    f = spec("gaussian")
    with pytest.raises(ValueError):
        spectral.apply_multiplier(f, M.laplacian(0.5), pad=3)
    wide = spec("gaussian", Grid(1, 3.0, 64))
    with pytest.raises(ValueError, match="aliasing"):
        spectral.spectral_riesz(wide)


def test_laplacian_semigroup():
    f = spec("gaussian")
    twice = spectral.apply_multiplier(f, [M.laplacian(0.5), M.laplacian(0.5)])
    once = spectral.apply_multiplier(f, M.laplacian(1.0))
    assert rel_l2(twice, once) <= 1e-10


@pytest.mark.parametrize("grid", [G1, G2])
def test_potential_semigroup(grid):
    f = spec("gaussian_derivative", grid)
    a = spectral.apply_multiplier(f, [M.potential(0.3), M.potential(0.4)])
    b = spectral.apply_multiplier(f, M.potential(0.7))
    assert rel_l2(a, b) <= 1e-8


def test_dc_warning_only_for_nonzero_mean():
    g = spec("gaussian", G1)
    with pytest.warns(spectral.DCBinWarning):
        spectral.spectral_riesz_potential(g, 0.6)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        spectral.spectral_riesz_potential(spec("gaussian_derivative"), 0.6)
        spectral.spectral_riesz_potential(g, 0.3)
    with pytest.raises(ValueError):
        spectral.spectral_riesz_potential(g, 1.0)


def test_gradient_at_one_is_classical():
    f = spec("gaussian")
    d = spectral.spectral_nabla(f, 1.0)[0].values
    x = G1.axis()
    assert np.max(np.abs(d + 2 * x * np.exp(-x ** 2))) <= 1e-6


def test_riesz_of_odd_gaussian_at_origin():
    f = spec("gaussian_derivative", amplitude=-0.5)
    r = spectral.spectral_nabla(f, 0.0)[0]
    assert abs(r.center_value() - 1 / math.sqrt(math.pi)) <= 1e-3


@pytest.mark.parametrize("alpha", [0.0, 0.4, 1.0])
def test_nabla_of_zero(alpha):
    z = ScalarField(G2, np.zeros(G2.shape))
    assert np.all(spectral.spectral_nabla(z, alpha).stack() == 0.0)


@pytest.mark.parametrize("grid", [G1, G2])
def test_bessel_decomposition(grid):
    f = spec("gaussian", grid)
    for a, b in ((0.8, 0.3), (0.5, 0.5), (0.6, 0.0)):
        lhs = spectral.apply_multiplier(f, [M.identity_plus(a), M.bessel(a, b)])
        rhs = spectral.apply_multiplier(f, M.laplacian(b))
        assert rel_l2(lhs, rhs) <= 1e-10


def test_riesz_involution():
    f = spec("gaussian_derivative", G2)
    total = sum(spectral.apply_multiplier(f, [M.riesz(j), M.riesz(j)]).values for j in range(2))
    assert lp_norm(f.with_values(total + f.values), 2) <= 1e-8 * lp_norm(f, 2)


@pytest.mark.parametrize("grid", [G1, G2])
@pytest.mark.parametrize("a, b", [(0.8, 0.3), (0.5, 0.1), (0.9, 0.6)])
def test_representation_formula(grid, a, b):
    f = spec("gaussian_derivative", grid)
    direct = spectral.spectral_nabla(f, b)
    rep = spectral.spectral_nabla(f, a, then=[M.potential(a - b)])
    assert lp_norm(rep - direct, 2) <= 1e-8 * lp_norm(direct, 2)


def test_div_is_adjoint_of_nabla():
    f = spec("gaussian", G2)
    phi = VectorField(G2, (spec("gaussian_derivative", G2, sigma=0.9), spec("gaussian", G2, sigma=1.1)))
    lhs = np.sum(f.values * spectral.spectral_div(phi, 0.4).values)
    rhs = sum(np.sum(c.values * p.values) for c, p in zip(spectral.spectral_nabla(f, 0.4), phi))
    assert abs(lhs + rhs) * G2.cell_volume <= 1e-10 * lp_norm(f, 2) * lp_norm(phi, 2)


def test_mihlin_equal_orders_bounded_by_one():
    for a in (0.0, 0.3, 1.0):
        v = spectral.mihlin_norm_estimate(a, a)
        assert 0 < v <= 1.0 + 1e-9


def test_mihlin_refinement_and_domain():
    coarse = spectral.mihlin_norm_estimate(0.5, 0.25)
    fine = spectral.mihlin_norm_estimate(0.5, 0.25, xi_grid=spectral.default_xi_grid(40))
    assert math.isfinite(coarse) and abs(fine / coarse - 1) <= 0.05
    with pytest.raises(ValueError):
        spectral.mihlin_norm_estimate(0.3, 0.5)


def test_default_xi_grid_span():
    xi = spectral.default_xi_grid()
    assert xi[0] == pytest.approx(1e-4) and xi[-1] == pytest.approx(1e4)
