"""Invariant suite run by ``shearwave validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dispersion, sturm, wavefield
from .config import RunConfig
from .laminar import LaminarFlow


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _upper(name, value, tol):
    return Check(name, float(value), tol, bool(value < tol))


def run_suite(cfg: RunConfig) -> list:
    prof, const, steps = cfg.profile, cfg.constants, cfg.steps
    out = []
    lam0 = sturm.lambda0(prof, const)
    flow0 = LaminarFlow(prof, lam0)
    out.append(_upper("lambda0_closed_form", abs(const.g * flow0.inv_b3_integral() - 1.0), 1e-9))
    out.append(_upper("laminar_surface_condition", abs(flow0.surface_residual(const.g)), 1e-12))
    shot0 = sturm.shoot_left(prof, const, lam0, 0.0, steps=steps)
    scale0 = abs(shot0.w[-1]) + const.g * abs(shot0.z[-1])
    out.append(_upper("xi_zero_at_lambda0", abs(shot0.xi) / scale0, 1e-8))

    worst = 0.0
    for f in (1.1, 1.5, 2.0):
        for mu in (0.5, 2.0, 8.0):
            a = sturm.xi(prof, const, f * lam0, mu, steps=steps)
            b = sturm.xi_wronskian(prof, const, f * lam0, mu, steps=steps)
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    out.append(_upper("two_sided_shooting", worst, 1e-6))

    lam, mu = 1.3 * lam0, 2.0
    h_mu, h_lam = 1e-5 * max(1.0, mu), 1e-5 * lam
    fd_mu = (sturm.xi(prof, const, lam, mu + h_mu, steps=steps) - sturm.xi(prof, const, lam, mu - h_mu, steps=steps)) / (2 * h_mu)
    fd_lam = (sturm.xi(prof, const, lam + h_lam, mu, steps=steps) - sturm.xi(prof, const, lam - h_lam, mu, steps=steps)) / (2 * h_lam)
    xm = sturm.xi_mu(prof, const, lam, mu, steps=steps)
    xl = sturm.xi_lambda(prof, const, lam, mu, steps=steps)
    out.append(_upper("xi_mu_vs_differences", abs(xm - fd_mu) / abs(fd_mu), 1e-4))
    out.append(_upper("xi_lambda_vs_differences", abs(xl.ode - fd_lam) / abs(fd_lam), 1e-4))
    out.append(_upper("xi_lambda_channels", abs(xl.ode - xl.integral) / abs(xl.ode), 1e-6))
    shot = sturm.shoot_left(prof, const, lam, mu, steps=steps)
    out.append(_upper("integral_relation", sturm.integral_relation_residual(shot), 1e-8))

    lams = lam0 * (1.0 + np.geomspace(1e-3, 10.0, 8))
    mins = min(sturm.xi(prof, const, x, 0.0, steps=steps) for x in lams)
    out.append(Check("xi_positive_at_zero_mu", mins, 0.0, bool(mins > 0)))

    lf = wavefield.laminar_field(prof, const, 1.5 * lam0, nq=16, np_per_layer=20)
    ray = wavefield.stream_function(lf, 0.0, steps=200)
    out.append(_upper("laminar_bed_stream_value", abs(ray.bed_value + prof.p0), 1e-8))
    phys = wavefield.physical_fields(lf, 0.0, steps=200)
    out.append(_upper("laminar_vertical_velocity", float(np.max(np.abs(phys.v))), 1e-12))

    if const.sigma > 0:
        mus = [sturm.mu_of_lambda(prof, const, x, steps=steps, lam0=lam0, check=False) for x in lam0 * np.array([1.0, 1.2, 1.5, 2.0, 3.0])]
        gap = min(np.diff(mus))
        out.append(Check("mu_strictly_increasing", float(gap), 0.0, bool(gap > 0)))
        cond = sturm.check_condition_d2(prof, const)
        n = sturm.divisor_for(mus[0])
        out.append(Check("divisor_consistent_with_surface_tension", float(n), 1.0, bool(n == 1 or not cond.holds)))
        pts = [sturm.bifurcation_lambda(prof, const, k, n, steps=steps) for k in (1, 2)]
        out.append(Check("bifurcation_order", pts[1].lambda_k - pts[0].lambda_k, 0.0, bool(pts[1].lambda_k > pts[0].lambda_k)))
        fld = wavefield.first_order_height(pts[0], 0.25 * wavefield.pbc_amplitude_bound(pts[0]), nq=32, np_per_layer=40)
        pbc = wavefield.check_pbc(fld)
        out.append(Check("first_order_pbc", pbc.min_h_p, 0.0, pbc.ok))
        sym = math.isclose(float(np.max(np.abs(fld.h - fld.h[(-np.arange(len(fld.q))) % len(fld.q)]))), 0.0)
        out.append(Check("field_even_in_q", 0.0 if sym else 1.0, 0.0, sym))

    if prof.n_layers == 2:
        for k in (1, 2, 3):
            chk = dispersion.dispersion_vs_shooting(prof, const, k, steps=steps)
            if not chk.found:
                out.append(Check(f"dispersion_k{k}_found", 0.0, 1.0, False))
                continue
            out.append(_upper(f"dispersion_k{k}_relation", abs(chk.layered_residual) / chk.layered_scale, 1e-6))
            out.append(_upper(f"dispersion_k{k}_cubic_root", chk.root_rel_err, 1e-6))
    return out
