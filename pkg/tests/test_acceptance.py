"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary (and to stdout when run with ``-s``).
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from shearwave import (
    DispersionInput,
    MultiplierSymbolInput,
    PhysicalConstants,
    VorticityProfile,
    bifurcation_lambda,
    dispersion,
    lambda0,
    min_period_divisor,
    mu_of_lambda,
    sturm,
    wavefield,
)
from shearwave.wavefield import first_order_height, laminar_field, pb_residual, weak_residual

from conftest import ACCEPTANCE_LINES


def report(number, title, passed, detail):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {title} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert passed, line


IRROT = VorticityProfile.constant(-1.0)
ONE_LAYER = VorticityProfile.constant(-1.0, 2.0)
TWO_LAYER = VorticityProfile((-2.0, -1.0, 0.0), (1.0, -2.0))
THREE_LAYER = VorticityProfile((-1.5, -1.0, -0.4, 0.0), (2.0, -1.0, 1.0))


def test_criterion_01_irrotational_oracles():
    errs = [abs(lambda0(IRROT, PhysicalConstants(g, 0.0)) - g ** (2 / 3)) for g in (1.0, 8.0, 9.81)]
    xi11 = sturm.xi(IRROT, PhysicalConstants(1.0, 0.0), 1.0, 1.0)
    xi_err = abs(xi11 - math.exp(-1))
    ok = max(errs) < 1e-9 and xi_err < 1e-8
    report(1, "irrotational oracles", ok, f"max |lambda0 - g^(2/3)| = {max(errs):.2e}, |xi(1,1) - 1/e| = {xi_err:.2e}")


def test_criterion_02_two_sided_shooting():
    cases = [
        (IRROT, PhysicalConstants(1.0, 0.0)),
        (ONE_LAYER, PhysicalConstants(9.81, 0.07)),
        (TWO_LAYER, PhysicalConstants(9.81, 0.07)),
    ]
    worst = 0.0
    for prof, const in cases:
        lam0 = lambda0(prof, const)
        for lam in lam0 * np.linspace(0.8, 4.0, 10):
            for mu in np.geomspace(0.1, 200.0, 10):
                a = sturm.xi(prof, const, lam, mu)
                b = sturm.xi_wronskian(prof, const, lam, mu)
                worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    report(2, "left shot vs right-shot Wronskian value, 3 x 10 x 10 grid", worst < 1e-6, f"max rel err {worst:.2e}")


def test_criterion_03_derivative_identities():
    rng = np.random.default_rng(20240603)
    cases = [
        (IRROT, PhysicalConstants(1.0, 1.0)),
        (TWO_LAYER, PhysicalConstants(9.81, 3.0)),
        (THREE_LAYER, PhysicalConstants(1.0, 0.5)),
    ]
    fd_worst = chan_worst = 0.0
    for i in range(20):
        prof, const = cases[i % len(cases)]
        lam0 = lambda0(prof, const)
        lam = lam0 * rng.uniform(1.05, 4.0)
        mu = rng.uniform(0.1, 50.0)
        hm, hl = 1e-5 * max(1.0, mu), 1e-5 * lam
        fd_mu = (sturm.xi(prof, const, lam, mu + hm) - sturm.xi(prof, const, lam, mu - hm)) / (2 * hm)
        fd_lam = (sturm.xi(prof, const, lam + hl, mu) - sturm.xi(prof, const, lam - hl, mu)) / (2 * hl)
        xm = sturm.xi_mu(prof, const, lam, mu)
        xl = sturm.xi_lambda(prof, const, lam, mu)
        fd_worst = max(fd_worst, abs(xm - fd_mu) / abs(fd_mu), abs(xl.ode - fd_lam) / abs(fd_lam))
        chan_worst = max(chan_worst, abs(xl.ode - xl.integral) / abs(xl.ode))
    signs_ok = True
    zeros = 0
    for prof, const in cases:
        lam0 = lambda0(prof, const)
        for f in (1.2, 2.0, 5.0):
            mu = mu_of_lambda(prof, const, f * lam0)
            if mu <= 0:
                continue
            zeros += 1
            signs_ok &= sturm.xi_lambda(prof, const, f * lam0, mu).ode > 0
            signs_ok &= sturm.xi_mu(prof, const, f * lam0, mu) < 0
        n = min_period_divisor(prof, const)
        for k in (1, 2, 3):
            pt = bifurcation_lambda(prof, const, k, n)
            zeros += 1
            signs_ok &= sturm.xi_lambda(prof, const, pt.lambda_k, pt.mu).ode > 0
            signs_ok &= sturm.xi_mu(prof, const, pt.lambda_k, pt.mu) < 0
    ok = fd_worst < 1e-4 and chan_worst < 1e-6 and signs_ok
    report(
        3,
        "derivative identities",
        ok,
        f"fd rel err {fd_worst:.2e}, channel rel err {chan_worst:.2e}, signs at {zeros} zeros {'ok' if signs_ok else 'violated'}",
    )


def test_criterion_04_sign_structure():
    prof, const = TWO_LAYER, PhysicalConstants(9.81, 3.0)
    lam0 = lambda0(prof, const)
    lams = lam0 * (1.0 + np.geomspace(1e-4, 50.0, 25))
    xi0_min = min(sturm.xi(prof, const, lam, 0.0) for lam in lams)
    single = True
    for lam in lams[::3]:
        mu_star = mu_of_lambda(prof, const, lam, lam0=lam0, check=False)
        grid = np.concatenate(([0.0], np.geomspace(1e-3, 20.0 * mu_star + 100.0, 200)))
        vals = np.array([sturm.xi(prof, const, lam, m) for m in grid])
        changes = int(np.sum(np.signbit(vals[1:]) != np.signbit(vals[:-1])))
        single &= changes == 1
    lams50 = lam0 * np.linspace(1.0, 6.0, 50)
    mus = [mu_of_lambda(prof, const, lam, lam0=lam0, check=False) for lam in lams50]
    increasing = bool(np.all(np.diff(mus) > 0))
    r_lo = mu_of_lambda(prof, const, 10 * lam0, lam0=lam0) / (10 * lam0)
    r_hi = mu_of_lambda(prof, const, 1e3 * lam0, lam0=lam0) / (1e3 * lam0)
    ok = xi0_min > 0 and single and increasing and r_hi > r_lo
    report(
        4,
        "sign and monotonicity structure",
        ok,
        f"min xi(lambda,0) = {xi0_min:.3e}, single sign change = {single}, mu increasing = {increasing}, "
        f"mu/lambda {r_lo:.3e} -> {r_hi:.3e}",
    )


def test_criterion_05_shooting_vs_dispersion():
    const = PhysicalConstants(9.81, 0.07)
    worst_rel = worst_root = 0.0
    found = True
    for k in (1, 2, 3):
        chk = dispersion.dispersion_vs_shooting(TWO_LAYER, const, k)
        if not chk.found:
            found = False
            continue
        worst_rel = max(worst_rel, abs(chk.layered_residual) / chk.layered_scale)
        worst_root = max(worst_root, chk.root_rel_err)
    ok = found and worst_rel < 1e-6 and worst_root < 1e-6
    report(5, "shooting root vs dispersion relation, k = 1, 2, 3", ok, f"residual/scale {worst_rel:.2e}, cubic root rel err {worst_root:.2e}")


def test_criterion_06_reduction_chain():
    rng = np.random.default_rng(7)
    worst = worst0 = 0.0
    for _ in range(100):
        gam = rng.uniform(-5.0, 5.0)
        d = rng.uniform(0.1, 5.0)
        k = int(rng.integers(1, 11))
        g = rng.uniform(0.5, 20.0)
        sig = rng.uniform(0.0, 2.0)
        f = rng.uniform(0.1, 0.9)
        for gg in (gam, 0.0):
            roots = dispersion.solve_dispersion(DispersionInput(f * d, (1 - f) * d, gg, gg, g, sig, k))
            ref = dispersion.special_case_equal_vorticity(gg, d, k, g, sig)
            err = min((abs(r - ref) / max(1.0, ref) for r in roots), default=math.inf)
            if gg == 0.0:
                irr = math.sqrt((g + sig * k * k) * math.tanh(k * d) / k)
                worst0 = max(worst0, err, abs(ref - irr) / max(1.0, irr))
            else:
                worst = max(worst, err)
    ok = worst < 1e-10 and worst0 < 1e-10
    report(6, "equal-vorticity reduction chain, 100 random inputs", ok, f"sheared {worst:.2e}, irrotational {worst0:.2e}")


def test_criterion_07_symbol_decay():
    inp = MultiplierSymbolInput(1.0, 1.0, 0.0, 1.0, 1.0)
    a5, b5 = dispersion.symbol_decay_check(inp, 5000)
    a10, b10 = dispersion.symbol_decay_check(inp, 10000)
    finite = all(map(math.isfinite, (a5, b5, a10, b10)))
    ch_a, ch_b = abs(a10 - a5) / a5, abs(b10 - b5) / b5
    asym = abs(1e4 * dispersion.multiplier_symbol(inp, 1e4) - 0.5)
    ok = finite and ch_a < 0.01 and ch_b < 0.01 and asym < 1e-3
    report(7, "multiplier decay", ok, f"changes {ch_a:.2e}, {ch_b:.2e}; |k lambda_k - a/2| at 1e4 = {asym:.2e}")


def _slope(values, amps):
    return float(np.polyfit(np.log(amps), np.log(values), 1)[0])


@pytest.mark.parametrize(
    "prof, const",
    [(TWO_LAYER, PhysicalConstants(9.81, 3.0)), (THREE_LAYER, PhysicalConstants(1.0, 0.5))],
    ids=["two_layer", "three_layer"],
)
def test_criterion_08_branch_order(prof, const):
    pt = bifurcation_lambda(prof, const, 1)
    amps = np.array([1e-2, 5e-3, 2.5e-3, 1.25e-3])
    strong, weak = [], []
    for s in amps:
        fld = first_order_height(pt, s, nq=256, np_per_layer=1000)
        r = pb_residual(fld)
        strong.append(max(r.max_interior, r.surface))
        weak.append(float(np.max(np.abs(weak_residual(fld)))))
    s1, s2 = _slope(strong, amps), _slope(weak, amps)
    ok = abs(s1 - 2.0) <= 0.2 and abs(s2 - 2.0) <= 0.2
    report(8, f"O(s^2) residuals at (lambda_1, n={pt.n}), {prof.n_layers} layers", ok, f"slopes strong {s1:.3f}, weak {s2:.3f}")


def test_criterion_09_field_consistency():
    const = PhysicalConstants(9.81, 3.0)
    lam = 1.5 * lambda0(TWO_LAYER, const)
    fine = laminar_field(TWO_LAYER, const, lam, nq=32, np_per_layer=200)
    coarse = laminar_field(TWO_LAYER, const, lam, nq=32, np_per_layer=100)
    rf, rc = pb_residual(fine), pb_residual(coarse)
    fine_norm = max(rf.max_interior, rf.surface, rf.bottom)
    coarse_norm = max(rc.max_interior, rc.surface, rc.bottom)
    # second-order discretisation error: halving the spacing quarters it
    floor_ok = fine_norm < 1e-4 and fine_norm < 0.3 * coarse_norm
    weak = float(np.max(np.abs(weak_residual(fine))))
    weak_c = float(np.max(np.abs(weak_residual(coarse))))
    weak_ok = weak < 1e-4 and weak < 0.3 * weak_c

    phys = wavefield.physical_fields(fine, 0.4)
    p_ray = np.clip(-phys.psi, TWO_LAYER.p0, 0.0)
    v_ok = float(np.max(np.abs(phys.v))) == 0.0
    speed_err = float(np.max(np.abs(phys.u_minus_c + fine.flow.b(p_ray))))
    bed_err = abs(wavefield.stream_function(fine, 0.4).bed_value + TWO_LAYER.p0)

    vort_ok = True
    worst_vort = 0.0
    pt = bifurcation_lambda(TWO_LAYER, const, 1)
    wave = first_order_height(pt, 1e-3)
    for fld, extra in ((fine, 0.0), (wave, 1e-3**2)):
        d = fld.depth
        for frac in (0.25, 0.75):
            y = -frac * d
            for delta in (1e-2, 5e-3):
                omega, gam = wavefield.vorticity_check(fld, 0.3, y, delta=delta)
                err = abs(omega - gam)
                worst_vort = max(worst_vort, err)
                vort_ok &= err < 10.0 * (delta**2 + extra) * (1 + abs(gam))
    ok = floor_ok and weak_ok and v_ok and speed_err < 1e-10 and bed_err < 1e-8 and vort_ok
    report(
        9,
        "laminar field consistency",
        ok,
        f"strong {fine_norm:.1e} (coarse {coarse_norm:.1e}), weak {weak:.1e} (coarse {weak_c:.1e}), "
        f"|u-c+b| {speed_err:.1e}, bed {bed_err:.1e}, vorticity {worst_vort:.1e}",
    )


def test_criterion_10_determinism(tmp_path):
    outs = []
    for run in ("a", "b"):
        out = tmp_path / run
        cmd = [sys.executable, "-m", "shearwave.cli", "validate", "--out", str(out)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stdout + proc.stderr
        outs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
    ok = bool(outs[0]) and outs[0] == outs[1]
    report(10, "byte-identical validate artifacts", ok, f"{len(outs[0])} CSV files compared")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
