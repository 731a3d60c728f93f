import math

import numpy as np
import pytest

from shearwave import (
    AmplitudeError,
    PBCViolation,
    PhysicalConstants,
    VorticityProfile,
    bifurcation_lambda,
    wavefield as W,
)

CAP = PhysicalConstants(9.81, 3.0)


@pytest.fixture(scope="module")
def point():
    return bifurcation_lambda(VorticityProfile((-2.0, -1.0, 0.0), (1.0, -2.0)), CAP, 1)


def test_zero_amplitude_is_laminar(point):
    fld = W.first_order_height(point, 0.0, nq=16, np_per_layer=20)
    assert np.all(fld.h == fld.flow.height(fld.p)[None, :])


def test_bed_and_symmetry(point):
    fld = W.first_order_height(point, 0.05, nq=64, np_per_layer=30)
    assert np.all(fld.h[:, 0] == 0.0)
    mirror = fld.h[(-np.arange(64)) % 64]
    assert np.array_equal(fld.h, mirror)


def test_single_crest_and_trough(point):
    fld = W.first_order_height(point, 0.05, nq=128, np_per_layer=20)
    eta = fld.h[:, -1] - fld.depth
    assert np.argmax(eta) == 0
    slope = np.sign(np.roll(eta, -1) - eta)
    extrema = np.sum(slope != np.roll(slope, 1))
    assert extrema == 2


def test_pbc_laminar_irrotational():
    fld = W.laminar_field(VorticityProfile.constant(-1.0), PhysicalConstants(1.0), 4.0, nq=8, np_per_layer=10)
    rep = W.check_pbc(fld)
    assert rep.ok and rep.min_h_p == pytest.approx(0.5, abs=1e-12)


def test_pbc_laminar_rotational_bound(point):
    fld = W.laminar_field(point.profile, CAP, point.lambda_k, nq=8, np_per_layer=200)
    b_max = np.max(fld.flow.b_nodes())
    assert W.check_pbc(fld).min_h_p == pytest.approx(1.0 / b_max, rel=1e-6)


def test_pbc_small_and_huge(point):
    small = 1e-3 * np.min(1.0 / point.flow.b(point.p))
    assert W.check_pbc(W.first_order_height(point, small, nq=32, np_per_layer=50)).ok
    huge = W.first_order_height(point, 50.0, nq=32, np_per_layer=50, enforce_bound=False)
    assert not W.check_pbc(huge).ok
    with pytest.raises(AmplitudeError):
        W.first_order_height(point, 50.0)
    with pytest.raises(PBCViolation):
        W.stream_function(huge, 0.0)


def test_laminar_residuals_and_wrong_head(point):
    fld = W.laminar_field(point.profile, CAP, point.lambda_k, nq=16, np_per_layer=400)
    res = W.pb_residual(fld, report_halving=True)
    assert res.bottom == 0.0
    assert max(res.max_interior, res.surface) < 1e-5
    assert res.coarse is not None and res.coarse.surface > 3.0 * res.surface
    shifted = W.pb_residual(fld, Q=fld.flow.total_head(CAP.g) + 1.0)
    assert shifted.surface == pytest.approx(1.0 / point.lambda_k, rel=1e-4)


def test_weak_residual_null_test(point):
    fld = W.first_order_height(point, 0.01, nq=32, np_per_layer=40)
    outside = W.BumpTest(0.0, 5.0, 0.5, 0.1)
    assert W.weak_residual(fld, [outside])[0] == 0.0


def test_weak_residual_straddles_breakpoints(point):
    fld = W.laminar_field(point.profile, CAP, point.lambda_k, nq=32, np_per_layer=200)
    tests = W.default_test_functions(fld)
    assert any(t.pc == -1.0 for t in tests)
    assert np.max(np.abs(W.weak_residual(fld, tests))) < 1e-5


def test_stream_function_laminar_irrotational():
    prof = VorticityProfile.constant(-1.0)
    lam = 3.0
    fld = W.laminar_field(prof, PhysicalConstants(1.0), lam, nq=8, np_per_layer=10)
    ray = W.stream_function(fld, 0.2, steps=50)
    d = fld.depth
    assert np.allclose(ray.psi, 1.0 - math.sqrt(lam) * (ray.y + d), atol=1e-13)
    assert ray.bed_value == pytest.approx(1.0, abs=1e-12)
    assert np.all(ray.psi_y < 0)


def test_stream_function_level_curves(point):
    fld = W.first_order_height(point, 0.05, nq=32, np_per_layer=40)
    x = 0.7
    ray = W.stream_function(fld, x)
    assert ray.bed_value == pytest.approx(-point.profile.p0, abs=1e-8)
    assert np.all(ray.psi_y < 0)
    mode = fld._mode
    for p in (-1.8, -1.0, -0.3):
        i = point.profile.layer_index(p)
        y = fld.flow.height(p) + 0.05 * float(mode.v_splines[i](p)) * math.cos(fld.wavenumber * x) - fld.depth
        assert abs(ray.at(y) + p) < 1e-6


def test_physical_fields_wave(point):
    fld = W.first_order_height(point, 0.02, nq=32, np_per_layer=40)
    phys = W.physical_fields(fld, 0.4)
    assert np.all(phys.u_minus_c < 0)
    # first-order field: Bernoulli residual at the surface is second order in s
    assert abs(phys.surface_pressure_residual) < 50 * 0.02**2
    crest = W.physical_fields(fld, 0.0)
    assert abs(crest.surface_pressure_residual) < 1e-10
    assert np.max(np.abs(crest.v)) < 1e-9


def test_vorticity_recovery_laminar(point):
    fld = W.laminar_field(point.profile, CAP, point.lambda_k, nq=8, np_per_layer=10)
    for y, gam in ((-0.1, -2.0), (-0.9 * fld.depth, 1.0)):
        omega, g_psi = W.vorticity_check(fld, 0.0, y)
        assert g_psi == gam
        assert omega == pytest.approx(gam, abs=1e-6)


def test_svg_is_deterministic(point, tmp_path):
    from shearwave.plotting import render_field_svg

    fld = W.first_order_height(point, 0.05, nq=32, np_per_layer=20)
    render_field_svg(fld, tmp_path / "a.svg")
    render_field_svg(fld, tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
