import math

import numpy as np
import pytest

from fraclab import constants, quadrature as q, spectral
from fraclab.fields import Grid, ScalarField, TestFunctionSpec, VectorField, besov_counterexample, sample
from fraclab.norms import lp_norm

G1 = Grid(1, 12.0, 1024)
G2 = Grid(2, 6.0, 64)


def spec(family, grid=G1, **p):
    return sample(TestFunctionSpec(family, p), grid)


def rel_inf(a, b):
    a = a.stack() if isinstance(a, VectorField) else a.values
    b = b.stack() if isinstance(b, VectorField) else b.values
    return np.max(np.abs(a - b)) / np.max(np.abs(b))


def test_config_validation():
    for kw in ({"tail_box_factor": 0.5}, {"tail_box_factor": 1.5}, {"pv_epsilon": -1}, {"clamp": "x"}):
        with pytest.raises(ValueError):
            q.QuadratureConfig(**kw)


@pytest.mark.parametrize("n, N", [(1, 64), (2, 16)])
def test_constant_field_maps_to_zero(n, N):
    # zero outside the box is not a constant on R^n, so integrate over the box only
    cfg = q.QuadratureConfig(decay_threshold=1.0, tail_box_factor=1)
    g = Grid(n, 4.0, N)
    c = ScalarField(g, np.full(g.shape, 3.0))
    phi = VectorField(g, (c,) * n)
    assert np.max(np.abs(q.quad_nabla(c, 0.5, cfg).stack())) <= 1e-12
    assert np.max(np.abs(q.quad_div(phi, 0.5, cfg).values)) <= 1e-12
    assert np.max(np.abs(q.quad_riesz(c, cfg).stack())) <= 1e-12
    assert np.max(np.abs(q.quad_frac_laplacian(c, 0.5, cfg).values)) <= 1e-12
    assert np.max(q.quad_dee_alpha(c, 0.5, cfg).values) == 0.0


def test_truncated_box_reports_tail():
    f = spec("gaussian", Grid(1, 4.0, 128))
    assert q.tail_bound(f, 1.5) == 0.0
    cut = q.QuadratureConfig(tail_box_factor=2)
    assert q.tail_bound(f, 1.5, cut) > 0
    wide = q.quad_frac_laplacian(f, 0.5, cut)
    ref = q.quad_frac_laplacian(f, 0.5)
    assert np.max(np.abs((wide - ref).values)) <= 2 * q.tail_bound(f, 1.5, cut) * abs(constants.nu(1, 0.5))


@pytest.mark.parametrize("grid", [G1, G2])
def test_even_input_odd_kernel_vanishes_at_centre(grid):
    f = spec("gaussian", grid)
    for out in (q.quad_nabla(f, 0.5), q.quad_riesz(f)):
        assert abs(out[0].center_value()) <= 1e-12


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_nabla_matches_spectral_1d(alpha):
    f = spec("gaussian")
    assert rel_inf(q.quad_nabla(f, alpha), spectral.spectral_nabla(f, alpha, pad=8)) <= 1e-2


def test_laplacian_matches_spectral():
    f = spec("gaussian")
    assert rel_inf(q.quad_frac_laplacian(f, 0.5), spectral.spectral_frac_laplacian(f, 0.5, 8)) <= 2e-2


def test_div_reduces_to_nabla_component():
    f = spec("gaussian", G2)
    zero = ScalarField(G2, np.zeros(G2.shape))
    d = q.quad_div(VectorField(G2, (f, zero)), 0.5)
    np.testing.assert_allclose(d.values, q.quad_nabla(f, 0.5)[0].values, rtol=0, atol=1e-14)


@pytest.mark.parametrize("grid, alpha", [(G1, 0.25), (G1, 0.75), (G2, 0.5)])
def test_duality(grid, alpha):
    f = spec("gaussian", grid)
    phi = VectorField(grid, tuple(spec("gaussian_derivative", grid, sigma=0.9, axis=j) for j in range(grid.n)))
    a = np.sum(f.values * q.quad_div(phi, alpha).values)
    b = sum(np.sum(c.values * p.values) for c, p in zip(q.quad_nabla(f, alpha), phi))
    assert abs(a + b) * grid.cell_volume <= 1e-3 * lp_norm(f, 2) * lp_norm(phi, 2)


def test_laplacian_self_adjoint():
    f = spec("gaussian")
    g = spec("gaussian", sigma=0.7, center=0.4)
    a = np.sum(f.values * q.quad_frac_laplacian(g, 0.6).values)
    b = np.sum(g.values * q.quad_frac_laplacian(f, 0.6).values)
    assert abs(a - b) * G1.cell_volume <= 1e-6 * lp_norm(f, 2) * lp_norm(g, 2)


def test_riesz_odd_gaussian_centre():
    f = spec("gaussian_derivative", amplitude=-0.5)
    r = q.quad_riesz(f)
    assert abs(r[0].center_value() - 1 / math.sqrt(math.pi)) <= 1e-3
    assert rel_inf(spectral.spectral_riesz(f), r) <= 1e-2


def test_riesz_potential_zero_and_domain():
    z = ScalarField(G1, np.zeros(G1.shape))
    assert np.all(q.quad_riesz_potential(z, 0.5).values == 0.0)
    with pytest.raises(ValueError):
        q.quad_riesz_potential(spec("gaussian"), 1.0)


def test_riesz_potential_semigroup():
    f = spec("gaussian_derivative", Grid(1, 12.0, 512))
    step = q.quad_riesz_potential(f, 0.3)
    twice = q.quad_riesz_potential(step, 0.3, q.QuadratureConfig(decay_threshold=1.0))
    once = q.quad_riesz_potential(f, 0.6)
    assert lp_norm(twice - once, 2) <= 3e-2 * lp_norm(once, 2)


@pytest.mark.parametrize("grid, alpha", [(G1, 0.3), (G1, 0.7), (G2, 0.5)])
def test_nabla_is_gradient_of_potential(grid, alpha):
    f = spec("gaussian", grid)
    pot = q.quad_riesz_potential(f, 1 - alpha)
    grad = q.lattice_gradient(pot)
    assert rel_inf(grad, q.quad_nabla(f, alpha)) <= 3e-2


def test_tail_op_beyond_box_is_zero():
    f = spec("gaussian", Grid(1, 4.0, 128))
    out = q.quad_tail_op(f, 0.5, 20.0)
    assert np.all(out[0].values == 0.0)
    with pytest.raises(ValueError):
        q.quad_tail_op(f, 0.5, 0.0)


@pytest.mark.parametrize("grid", [G1, G2])
def test_near_plus_tail_reassembles(grid):
    f = spec("gaussian", grid)
    full = q.quad_nabla(f, 0.4)
    parts = q.quad_near_op(f, 0.4, 1.5) + q.quad_tail_op(f, 0.4, 1.5)
    assert np.max(np.abs((parts - full).stack())) <= 1e-8 * np.max(np.abs(full.stack()))


def test_far_op_refuses_bad_radius():
    with pytest.raises(ValueError):
        q.quad_far_op(spec("gaussian"), 0.3, -1.0)


def test_dee_alpha_properties():
    z = ScalarField(G1, np.zeros(G1.shape))
    assert np.all(q.quad_dee_alpha(z, 0.5).values == 0.0)
    f = spec("gaussian")
    for a in (0.25, 0.5, 0.75):
        d = q.quad_dee_alpha(f, a)
        assert np.all(d.values >= 0)
        lap = q.quad_frac_laplacian(f, a)
        gap = np.abs(lap.values) - abs(constants.nu(1, a)) * d.values
        assert np.max(gap) <= 1e-12 * np.max(np.abs(lap.values))


def test_singular_field_refused():
    f = besov_counterexample(0.5, Grid(2, 4.0, 32))
    with pytest.raises(ValueError):
        q.quad_nabla(f, 0.5)


def test_non_decaying_field_refused():
    g = Grid(1, 4.0, 64)
    with pytest.raises(ValueError):
        q.quad_nabla(ScalarField(g, np.ones(g.shape)), 0.5)


def test_tail_bound_reported():
    b = q.tail_bound(spec("gaussian"), 1.5)
    assert math.isfinite(b) and b >= 0


def test_compiled_and_python_kernels_agree():
    from fraclab import kernels
    if not kernels.HAVE_COMPILED:
        pytest.skip("compiled kernels not built")
    f = spec("gaussian", G2)
    ref = q.quad_nabla(f, 0.5)
    kernels.use_backend("python")
    try:
        other = q.quad_nabla(f, 0.5)
    finally:
        kernels.use_backend("compiled")
    np.testing.assert_array_equal(ref.stack(), other.stack())
