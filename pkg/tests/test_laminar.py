import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from shearwave import DomainError, LaminarFlow, PhysicalConstants, VorticityProfile
from shearwave.laminar import sample, total_head

from test_model import profiles


def test_irrotational_closed_forms(irrotational):
    flow = LaminarFlow(irrotational, 4.0)
    assert flow.b(-0.3) == pytest.approx(2.0)
    assert flow.depth() == pytest.approx(0.5)
    assert flow.height(-0.5) == pytest.approx(0.25)
    assert flow.surface_speed() == 2.0
    assert total_head(flow, PhysicalConstants(1.0)) == pytest.approx(5.0)


def test_lambda_floor(two_layer):
    with pytest.raises(DomainError):
        LaminarFlow(two_layer, 4.0)
    LaminarFlow(two_layer, 4.0 + 1e-9)


def test_thicknesses_against_quadrature(two_layer):
    flow = LaminarFlow(two_layer, 9.0)
    d = flow.layer_thicknesses()
    for (lo, hi, _), di in zip(two_layer.layers(), d):
        ref, _ = quad(lambda p: 1.0 / flow.b(p), lo, hi, epsabs=1e-14, epsrel=1e-14)
        assert di == pytest.approx(ref, rel=1e-12)


def test_flat_layer_branch():
    prof = VorticityProfile((-1.0, -0.5, 0.0), (1e-14, 1.0))
    flow = LaminarFlow(prof, 5.0)
    ref, _ = quad(lambda p: 1.0 / flow.b(p), -1.0, 0.0, points=[-0.5], epsabs=1e-14)
    assert flow.depth() == pytest.approx(ref, rel=1e-10)


def test_surface_residual_zero_and_shift(two_layer):
    flow = LaminarFlow(two_layer, 7.0)
    assert abs(flow.surface_residual(9.81)) < 1e-14
    Q = flow.total_head(9.81) + 1.0
    assert flow.surface_residual(9.81, Q) == pytest.approx(-1.0 / 7.0)


def test_sample_contains_breakpoints(two_layer):
    p = sample(LaminarFlow(two_layer, 9.0), 10)
    assert len(p) == 21
    assert -1.0 in p and p[0] == -2.0 and p[-1] == 0.0


@given(profiles(), st.floats(1e-3, 10.0))
def test_height_monotone_and_bed(prof, excess):
    lam = 2.0 * prof.gamma_sup() + excess
    flow = LaminarFlow(prof, lam)
    p = np.linspace(prof.p0, 0.0, 200)
    H = flow.height(p)
    assert H[0] == 0.0
    assert np.all(np.diff(H) > 0)
    assert H[-1] == pytest.approx(flow.depth(), rel=1e-12)


@given(profiles(), st.floats(1e-2, 10.0))
def test_b_derivative_identity(prof, excess):
    # db/dp = -gamma/b inside each layer
    flow = LaminarFlow(prof, 2.0 * prof.gamma_sup() + excess)
    for lo, hi, gam in prof.layers():
        p = 0.5 * (lo + hi)
        h = 1e-6 * (hi - lo)
        slope = (flow.b(p + h) - flow.b(p - h)) / (2 * h)
        assert slope == pytest.approx(-gam / flow.b(p), rel=1e-5, abs=1e-7)


@given(profiles(), st.floats(1e-2, 10.0))
def test_inv_b3_cumulative_matches_quadrature(prof, excess):
    flow = LaminarFlow(prof, 2.0 * prof.gamma_sup() + excess)
    ref = sum(
        quad(lambda p: flow.b(p) ** -3, lo, hi, epsabs=1e-13, epsrel=1e-12)[0] for lo, hi, _ in prof.layers()
    )
    assert flow.inv_b3_integral() == pytest.approx(ref, rel=1e-9)
    assert flow.inv_b3_cumulative(0.0) == pytest.approx(flow.inv_b3_integral(), rel=1e-12)


def test_depth_math(irrotational):
    # irrotational p0 = -1: d = 1/sqrt(lambda)
    for lam in (0.5, 2.0, 30.0):
        assert LaminarFlow(irrotational, lam).depth() == pytest.approx(1.0 / math.sqrt(lam))
