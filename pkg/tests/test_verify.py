import math

import numpy as np
import pytest

from fraclab import spectral, verify
from fraclab.fields import Grid, ScalarField, TestFunctionSpec, sample
from fraclab.norms import lp_norm

G1 = Grid(1, 12.0, 1024)
A0 = [0.4, 0.2, 0.1, 0.05, 0.02]


def spec(family, grid=G1, **p):
    return sample(TestFunctionSpec(family, p), grid)


def zero(grid=G1):
    return ScalarField(grid, np.zeros(grid.shape))


def test_tolerances_frozen_and_positive():
    t = verify.TOLERANCES
    assert (t.jitter, t.limit_zero, t.limit_one, t.energy, t.energy_rough) == (0.05, 0.05, 0.02, 0.05, 0.07)
    assert (t.laplacian, t.continuity, t.interp_ratio, t.besov_stable, t.lq_growth) == (0.03, 0.01, 10, 0.10, 0.20)
    with pytest.raises(Exception):
        t.jitter = 1.0
    with pytest.raises(ValueError):
        verify.with_overrides(t, jitter=-1.0)


def test_report_rows_sorted_and_padded():
    r = verify.ConvergenceReport("x", [(0.3, 1.0), (0.1, 2.0, 3.0)], -1.0, 2.0, True, 0.05)
    assert [row[0] for row in r.rows] == [0.1, 0.3]
    assert all(len(row) == 4 for row in r.rows)
    assert math.isnan(r.rows[1][2])
    first = r.csv_rows()[0]
    assert first[:4] == ("x", 0.1, 2.0, 3.0) and math.isnan(first[4]) and first[5] == "pass"


def test_check_result_ratio_and_rows():
    c = verify.CheckResult("c", 0.0, 0.0, True, extras=(("k", 2.0),))
    assert c.ratio == 1.0
    rows = c.csv_rows()
    assert rows[0][0] == "c" and rows[1][0] == "c.k" and rows[1][2] == 2.0
    assert verify.CheckResult("d", 1.0, 0.0, False).ratio == math.inf


def test_monotone_within():
    assert verify.monotone_within([1.0, 0.5, 0.51, 0.2], 0.05)
    assert not verify.monotone_within([1.0, 0.5, 0.6], 0.05)


def test_limit_zero_refuses_nonzero_mean_in_l1():
    with pytest.raises(ValueError, match="zero-mean"):
        verify.sweep_limit_zero(spec("gaussian"), 1, A0)
    with pytest.raises(ValueError):
        verify.sweep_limit_zero(spec("gaussian_derivative"), 1, [])
    with pytest.raises(ValueError):
        verify.sweep_limit_zero(spec("gaussian_derivative"), 1, A0, backend="magic")


def test_limit_zero_and_laplacian_agree_in_shape():
    f = spec("gaussian_derivative")
    for a in (0.4, 0.1, 0.02):
        d1 = lp_norm(spectral.spectral_nabla(f, a) - spectral.spectral_riesz(f), 2)
        d2 = lp_norm(spectral.spectral_frac_laplacian(f, a) - f, 2)
        assert d1 <= d2 * (1 + 1e-6)


def test_limit_one_zero_field():
    r = verify.sweep_limit_one(zero(), 2, [0.9, 0.99])
    assert r.verdict and all(row[1] == 0.0 for row in r.rows)


def test_energy_zero_mean_and_indicator():
    r = verify.energy_limit(spec("gaussian_derivative"), A0)
    assert r.verdict and r.limit_estimate <= 0.05 * lp_norm(spectral.spectral_riesz(spec("gaussian_derivative")), 1)
    ind = spec("indicator_interval", a=0.0, b=1.0, smoothing=0.05)
    r = verify.energy_limit(ind, A0, tolerance=verify.TOLERANCES.energy_rough)
    assert r.verdict and abs(r.limit_estimate / (2 / math.pi) - 1) <= 0.07


def test_energy_truncated_contract():
    ind = spec("indicator_interval", a=0.0, b=1.0, smoothing=0.05)
    with pytest.raises(ValueError, match="exceed"):
        verify.energy_limit_truncated(ind, 0.5, A0, radius=1.0)
    gd = spec("gaussian_derivative")
    windowed = gd.with_values(gd.values * sample(TestFunctionSpec("cutoff_eta", {"R": 1.0}), G1).values)
    r = verify.energy_limit_truncated(windowed, 2.0, A0, radius=1.0)
    assert r.verdict


def test_laplacian_identity():
    with pytest.raises(ValueError):
        verify.laplacian_identity_sweep(spec("gaussian"), 1, A0)
    r = verify.laplacian_identity_sweep(spec("annulus_spectrum"), 1, [0.4, 0.2, 0.1, 0.05, 0.01])
    assert r.verdict


def test_continuity():
    r = verify.alpha_continuity_sweep(spec("gaussian"), 2, 0.5, [0.2, 0.1, 0.05, 0.01])
    assert r.verdict
    r0 = verify.alpha_continuity_sweep(spec("gaussian"), 2, 0.5, [0.0, 0.1])
    assert r0.rows[0][1] == 0.0
    with pytest.raises(ValueError):
        verify.alpha_continuity_sweep(spec("gaussian"), 2, 0.9, [0.2])


def test_interpolation_degenerate_and_order():
    g = spec("gaussian")
    res = verify.interpolation_audit(g, 2, 0.8, [0.2, 0.8], 0.2)
    assert [r.ratio for r in res[:2]] == [1.0, 1.0]
    with pytest.raises(ValueError):
        verify.interpolation_audit(g, 2, 0.5, [0.6], 0.0)


def test_h1bv_refuses_nonzero_mean():
    with pytest.raises(ValueError):
        verify.h1_bv_interpolation_audit(spec("gaussian"), 0.8, [0.5])
    res = verify.h1_bv_interpolation_audit(spec("gaussian_derivative"), 0.8, [0.8])
    assert res[0].ratio <= 1.0 + 1e-12


def test_splitting_zero_field_and_indicator():
    res = verify.splitting_inequality_audit(zero(), 0.6, 0.3, [1.0])
    assert res[0].lhs == 0.0 and res[0].passed
    ind = spec("indicator_interval", Grid(1, 8.0, 1024), a=0.0, b=1.0)
    res = verify.splitting_inequality_audit(ind, 0.6, 0.3, [0.5, 1.0, 2.0])
    assert all(r.passed for r in res)


def test_uniform_bound_and_lsc_zero_field():
    assert verify.uniform_bound_audit(zero(), 1.0, 0.5, 1).passed
    assert verify.lower_semicontinuity_probe(zero(), A0).passed
    assert verify.lower_semicontinuity_probe(spec("gaussian_derivative"), A0).passed


def test_uniform_convergence_diagnostic():
    r = verify.uniform_convergence_sweep(spec("gaussian"), A0)
    assert r.verdict and r.rows[0][1] < r.rows[-1][1]


def test_besov_demo_needs_planar_grid():
    with pytest.raises(ValueError):
        verify.besov_strict_inclusion_demo(0.5, n=1)


def test_verdicts_are_reproducible():
    f = spec("gaussian_derivative")
    a = verify.sweep_limit_zero(f, 1, A0)
    b = verify.sweep_limit_zero(f, 1, A0)
    assert a == b
