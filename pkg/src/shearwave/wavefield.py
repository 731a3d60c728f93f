"""First-order bifurcating waves in the height-function formulation.

Near a bifurcation point the branch is ``h(q, p) = H(p) + s v(p) cos(k n q)`` to
first order in the amplitude ``s``, where ``H`` is the laminar height and ``v``
the kernel eigenfunction. The field is assembled on a grid and checked against
the height equations in strong and weak form. Stream function, velocities and
pressure are recovered along vertical rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import AmplitudeError, DomainError, PBCViolation
from .laminar import LaminarFlow
from .model import PhysicalConstants, VorticityProfile
from .sturm import BifurcationPoint

DEFAULT_NQ = 128
DEFAULT_NP = 100
AMPLITUDE_CAP = 0.5


class _Mode:
    """Per-layer interpolants of the eigenfunction v and of its flux b^3 v'."""

    def __init__(self, point: BifurcationPoint):
        flow = point.flow
        p = np.asarray(point.p)
        v = np.asarray(point.eigenfunction)
        dv = np.asarray(point.eigen_slope)
        b = flow.b(p)
        flux = b**3 * dv
        dflux = point.mu * b * v
        starts = list(point.layer_starts) + [len(p) - 1]
        self.v_splines = []
        self.flux_splines = []
        for i in range(len(starts) - 1):
            sl = slice(starts[i], starts[i + 1] + 1)
            self.v_splines.append(CubicHermiteSpline(p[sl], v[sl], dv[sl]))
            self.flux_splines.append(CubicHermiteSpline(p[sl], flux[sl], dflux[sl]))
        self.p = p
        self.v = v
        self.dv = dv
        self.v_top = float(v[-1])


class _Layers:
    """Exact laminar coefficients evaluated with the formula of a chosen layer."""

    def __init__(self, profile: VorticityProfile, lam: float):
        self.profile = profile
        self.lam = lam
        self.bp = np.asarray(profile.breakpoints)
        self.gam = np.asarray(profile.vorticities)
        self.gnodes = np.asarray(profile.gamma_nodes)

    def big_gamma(self, i, p):
        return self.gnodes[i + 1] + self.gam[i] * (p - self.bp[i + 1])

    def b(self, i, p):
        return np.sqrt(self.lam - 2.0 * self.big_gamma(i, p))


@dataclass
class WaveField:
    """Height field sampled over one period in q and on ``[p0, 0]`` in p.

    ``h[j, i]`` is the height above the bed at ``(q[j], p[i])``. Breakpoints of the
    vorticity profile are grid rows; ``layer_rows[l]`` is the (first, last) row
    index of layer ``l``.
    """

    profile: VorticityProfile
    constants: PhysicalConstants
    lam: float
    wavenumber: float
    amplitude: float
    q: np.ndarray
    p: np.ndarray
    h: np.ndarray
    layer_rows: tuple
    point: Optional[BifurcationPoint] = None
    _mode: Optional[_Mode] = field(default=None, repr=False)

    @property
    def flow(self) -> LaminarFlow:
        return LaminarFlow(self.profile, self.lam)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.wavenumber

    @property
    def depth(self) -> float:
        return self.flow.depth()

    @property
    def dq(self) -> float:
        return self.period / len(self.q)

    def eta(self, x):
        """Surface elevation relative to the laminar depth."""
        x = np.asarray(x, dtype=float)
        if self._mode is None:
            return np.zeros_like(x)
        return self.amplitude * self._mode.v_top * np.cos(self.wavenumber * x)

    def eta_derivatives(self, x):
        """(eta', eta'') at x."""
        x = np.asarray(x, dtype=float)
        if self._mode is None:
            return np.zeros_like(x), np.zeros_like(x)
        a = self.amplitude * self._mode.v_top
        kk = self.wavenumber
        return -a * kk * np.sin(kk * x), -a * kk * kk * np.cos(kk * x)

    # exact evaluation of h and h_p inside layer i, used by the ray integrator
    def _height_in_layer(self, i, x, p, layers: _Layers):
        base = self.flow.height(np.clip(p, self.profile.p0, 0.0))
        if self._mode is None:
            return base
        return base + self.amplitude * self._mode.v_splines[i](p) * np.cos(self.wavenumber * x)

    def _hp_in_layer(self, i, x, p, layers: _Layers):
        b = layers.b(i, p)
        hp = 1.0 / b
        if self._mode is None:
            return hp
        dv = self._mode.flux_splines[i](p) / b**3
        return hp + self.amplitude * dv * np.cos(self.wavenumber * x)


def _grid_p(profile: VorticityProfile, n_per_layer: int):
    if n_per_layer < 2:
        raise DomainError("need at least 3 p-samples per layer")
    pieces, rows = [], []
    start = 0
    for lo, hi, _ in profile.layers():
        pieces.append(np.linspace(lo, hi, n_per_layer + 1)[:-1])
        rows.append((start, start + n_per_layer))
        start += n_per_layer
    pieces.append(np.array([0.0]))
    return np.concatenate(pieces), tuple(rows)


def _grid_q(wavenumber: float, nq: int):
    """Uniform periodic grid on [0, L) with cos values mirrored for exact evenness."""
    if nq < 4:
        raise DomainError("need at least 4 q-samples")
    period = 2.0 * math.pi / wavenumber
    j = np.arange(nq)
    q = j * period / nq
    c = np.cos(wavenumber * q)
    half = nq // 2
    c[nq - np.arange(1, half + (nq % 2))] = c[np.arange(1, half + (nq % 2))]
    return q, c


def laminar_field(
    profile: VorticityProfile,
    constants: PhysicalConstants,
    lam: float,
    *,
    wavenumber: float = 1.0,
    nq: int = DEFAULT_NQ,
    np_per_layer: int = DEFAULT_NP,
) -> WaveField:
    """The trivial flat-surface solution as a WaveField."""
    flow = LaminarFlow(profile, lam)
    p, rows = _grid_p(profile, np_per_layer)
    q, _ = _grid_q(wavenumber, nq)
    h = np.broadcast_to(flow.height(p), (nq, len(p))).copy()
    return WaveField(profile, constants, lam, wavenumber, 0.0, q, p, h, rows)


def pbc_amplitude_bound(point: BifurcationPoint) -> float:
    """Largest |s| for which H' - |s| |v'| stays positive on the shooting grid."""
    flow = point.flow
    hp = 1.0 / flow.b(point.p)
    slope = np.abs(point.eigen_slope)
    mask = slope > 0
    if not np.any(mask):
        return math.inf
    return float(np.min(hp[mask] / slope[mask]))


def first_order_height(
    point: BifurcationPoint,
    s: float,
    *,
    nq: int = DEFAULT_NQ,
    np_per_layer: int = DEFAULT_NP,
    enforce_bound: bool = True,
) -> WaveField:
    """h(q, p) = H(p) + s v(p) cos(k n q) on a grid covering one period.

    Raises AmplitudeError when |s| exceeds half the amplitude at which h_p would
    first vanish (unless ``enforce_bound`` is False).
    """
    if not np.isfinite(s):
        raise AmplitudeError("amplitude must be finite")
    bound = pbc_amplitude_bound(point)
    if enforce_bound and abs(s) > AMPLITUDE_CAP * bound:
        raise AmplitudeError(
            f"|s|={abs(s)} exceeds {AMPLITUDE_CAP} x PBC-safe bound {bound}"
        )
    mode = _Mode(point)
    flow = point.flow
    p, rows = _grid_p(point.profile, np_per_layer)
    q, c = _grid_q(point.wavenumber, nq)
    v = np.empty_like(p)
    for i, (r0, r1) in enumerate(rows):
        v[r0 : r1 + 1] = mode.v_splines[i](p[r0 : r1 + 1])
    v[0] = 0.0
    h = flow.height(p)[None, :] + s * c[:, None] * v[None, :]
    return WaveField(
        point.profile,
        point.constants,
        point.lambda_k,
        float(point.wavenumber),
        float(s),
        q,
        p,
        h,
        rows,
        point=point,
        _mode=mode,
    )


# -- finite differences -----------------------------------------------------------


def _dp_layer(f, dp):
    """First p-derivative inside one layer block (last axis), second order everywhere."""
    d = np.empty_like(f)
    d[..., 1:-1] = (f[..., 2:] - f[..., :-2]) / (2 * dp)
    d[..., 0] = (-3 * f[..., 0] + 4 * f[..., 1] - f[..., 2]) / (2 * dp)
    d[..., -1] = (3 * f[..., -1] - 4 * f[..., -2] + f[..., -3]) / (2 * dp)
    return d


def _layer_blocks(fld: WaveField):
    for i, (r0, r1) in enumerate(fld.layer_rows):
        yield i, r0, r1, fld.p[r1] - fld.p[r0]


def h_p_grid(fld: WaveField) -> list:
    """h_p per layer block (one-sided at the layer edges, centred inside)."""
    out = []
    for _, r0, r1, width in _layer_blocks(fld):
        dp = width / (r1 - r0)
        out.append(_dp_layer(fld.h[:, r0 : r1 + 1], dp))
    return out


def h_q_grid(fld: WaveField):
    return (np.roll(fld.h, -1, axis=0) - np.roll(fld.h, 1, axis=0)) / (2 * fld.dq)


def h_qq_grid(fld: WaveField):
    return (np.roll(fld.h, -1, axis=0) - 2 * fld.h + np.roll(fld.h, 1, axis=0)) / fld.dq**2


def h_p_full(fld: WaveField) -> np.ndarray:
    """h_p on the whole grid; a breakpoint row takes the value from the layer above."""
    out = np.empty_like(fld.h)
    for (_, r0, r1, _), hp in zip(_layer_blocks(fld), h_p_grid(fld)):
        out[:, r0 : r1 + 1] = hp
    return out


@dataclass(frozen=True)
class PBCReport:
    min_h_p: float
    ok: bool


def check_pbc(fld: WaveField) -> PBCReport:
    """Minimum of h_p over the grid and whether it is positive."""
    m = min(float(np.min(hp)) for hp in h_p_grid(fld))
    return PBCReport(m, m > 0.0)


# -- strong residual ------------------------------------------------------------


@dataclass
class PBResidual:
    interior: tuple
    surface: float
    bottom: float
    coarse: Optional["PBResidual"] = None

    @property
    def max_interior(self) -> float:
        return max(self.interior)


def _pb_norms(fld: WaveField, Q: float) -> PBResidual:
    g, sigma = fld.constants.g, fld.constants.sigma
    hq = h_q_grid(fld)
    hqq = h_qq_grid(fld)
    interior = []
    for i, r0, r1, width in _layer_blocks(fld):
        dp = width / (r1 - r0)
        blk = fld.h[:, r0 : r1 + 1]
        hp = (blk[:, 2:] - blk[:, :-2]) / (2 * dp)
        hpp = (blk[:, 2:] - 2 * blk[:, 1:-1] + blk[:, :-2]) / dp**2
        hq_b = hq[:, r0 : r1 + 1]
        hpq = (hq_b[:, 2:] - hq_b[:, :-2]) / (2 * dp)
        hq_i = hq_b[:, 1:-1]
        hqq_i = hqq[:, r0 + 1 : r1]
        gam = fld.profile.vorticities[i]
        res = (1 + hq_i**2) * hpp - 2 * hp * hq_i * hpq + hp**2 * hqq_i - gam * hp**3
        interior.append(float(np.max(np.abs(res))))
    hp_top = h_p_grid(fld)[-1][:, -1]
    top = fld.h[:, -1]
    hq_t, hqq_t = hq[:, -1], hqq[:, -1]
    surf = (
        1
        + hq_t**2
        + (2 * g * top - Q) * hp_top**2
        - 2 * sigma * hp_top**2 * hqq_t / (1 + hq_t**2) ** 1.5
    )
    return PBResidual(tuple(interior), float(np.max(np.abs(surf))), float(np.max(np.abs(fld.h[:, 0]))))


def _coarsened(fld: WaveField) -> Optional[WaveField]:
    if len(fld.q) % 2 or any((r1 - r0) % 2 or (r1 - r0) < 4 for r0, r1 in fld.layer_rows):
        return None
    rows = tuple((r0 // 2, r1 // 2) for r0, r1 in fld.layer_rows)
    return WaveField(
        fld.profile, fld.constants, fld.lam, fld.wavenumber, fld.amplitude,
        fld.q[::2], fld.p[::2], fld.h[::2, ::2], rows, fld.point, fld._mode,
    )


def pb_residual(fld: WaveField, Q: Optional[float] = None, *, report_halving: bool = False) -> PBResidual:
    """Sup-norms of the height equations on the grid.

    Returns one interior norm per layer (rows strictly inside the layer, centred
    second-order differences), the surface condition norm and max |h| on the bed.
    With ``report_halving`` the same norms on the grid with every other node
    dropped are attached as ``coarse``.
    """
    if Q is None:
        Q = fld.flow.total_head(fld.constants.g)
    res = _pb_norms(fld, Q)
    if report_halving:
        coarse = _coarsened(fld)
        if coarse is not None:
            res.coarse = _pb_norms(coarse, Q)
    return res


# -- weak residual ----------------------------------------------------------------


@dataclass(frozen=True)
class BumpTest:
    """phi(q, p) = B((q - qc)/rq) B((p - pc)/rp), B(t) = (1 - t^2)^3 on |t| < 1."""

    qc: float
    pc: float
    rq: float
    rp: float

    def _bump(self, t):
        inside = np.abs(t) < 1
        u = np.where(inside, 1 - t * t, 0.0)
        return u**3, np.where(inside, -6 * t * u**2, 0.0)

    def evaluate(self, q, p, period):
        """(phi_q, phi_p) at points (q, p), periodic in q."""
        dq = (q - self.qc + period / 2) % period - period / 2
        bq, dbq = self._bump(dq / self.rq)
        bpv, dbp = self._bump((p - self.pc) / self.rp)
        return dbq * bpv / self.rq, bq * dbp / self.rp


def default_test_functions(fld: WaveField) -> list:
    """Bumps at three phases, centred mid-layer and on every interior breakpoint."""
    bp = fld.profile.breakpoints
    widths = np.diff(bp)
    rp = 0.45 * float(np.min(widths))
    centres = [0.5 * (bp[i] + bp[i + 1]) for i in range(len(bp) - 1)] + list(bp[1:-1])
    L = fld.period
    out = []
    for pc in centres:
        for qc in (0.0, L / 4, L / 2):
            out.append(BumpTest(qc, pc, L / 4, rp))
    return out


def weak_residual(
    fld: WaveField, tests: Optional[Sequence[BumpTest]] = None
) -> np.ndarray:
    """Weak-form values int (h_q/h_p phi_q - (Gamma + (1 + h_q^2)/(2 h_p^2)) phi_p).

    Midpoint rule over grid cells; cell-centred derivatives are second order.
    """
    if tests is None:
        tests = default_test_functions(fld)
    h = fld.h
    hn = np.roll(h, -1, axis=0)
    qm = fld.q + fld.dq / 2
    vals = np.zeros(len(tests))
    for _, r0, r1, width in _layer_blocks(fld):
        dp = width / (r1 - r0)
        a, an = h[:, r0 : r1 + 1], hn[:, r0 : r1 + 1]
        hp = 0.5 * ((a[:, 1:] - a[:, :-1]) + (an[:, 1:] - an[:, :-1])) / dp
        hq = 0.5 * ((an[:, 1:] - a[:, 1:]) + (an[:, :-1] - a[:, :-1])) / fld.dq
        pm = 0.5 * (fld.p[r0:r1] + fld.p[r0 + 1 : r1 + 1])
        gam = fld.profile.big_gamma(pm)
        flux_q = hq / hp
        flux_p = gam[None, :] + (1 + hq**2) / (2 * hp**2)
        Qm, Pm = np.meshgrid(qm, pm, indexing="ij")
        for t, test in enumerate(tests):
            phq, php = test.evaluate(Qm, Pm, fld.period)
            vals[t] += np.sum(flux_q * phq - flux_p * php) * fld.dq * dp
    return vals


# -- stream function and physical fields ---------------------------------------


@dataclass
class StreamSample:
    """psi along the vertical ray at ``x``, from the surface down to the bed.

    ``segments[l]`` is the slice of samples between two consecutive streamlines
    p = breakpoint; y decreases along the arrays.
    """

    x: float
    y: np.ndarray
    psi: np.ndarray
    psi_y: np.ndarray
    segments: tuple
    p0: float

    @property
    def bed_value(self) -> float:
        return float(self.psi[-1])

    def at(self, y):
        """psi at heights y by cubic Hermite interpolation within the layer
        segment containing y; values above the surface or below the bed are
        extrapolated from the end segments."""
        y = np.asarray(y, dtype=float)
        flat = np.atleast_1d(y)
        out = np.empty_like(flat)
        done = np.zeros(flat.shape, dtype=bool)
        last = len(self.segments) - 1
        for idx, sl in enumerate(self.segments):
            ys = self.y[sl][::-1]
            mask = ~done & ((flat >= ys[0]) | (idx == last))
            if np.any(mask):
                spl = CubicHermiteSpline(ys, self.psi[sl][::-1], self.psi_y[sl][::-1])
                out[mask] = spl(flat[mask])
                done |= mask
        return float(out[0]) if y.ndim == 0 else out


def stream_rays(fld: WaveField, xs, *, steps: int = 1000) -> list:
    """Integrate psi_y = -1/h_p(x, -psi) downward from psi(eta) = 0 on several rays.

    Each layer between consecutive breakpoint streamlines is one RK4 segment of
    ``steps`` steps, so the interface is always a node.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    pbc = check_pbc(fld)
    if not pbc.ok:
        raise PBCViolation(f"h_p reaches {pbc.min_h_p}; stream function undefined")
    layers = _Layers(fld.profile, fld.lam)
    d = fld.depth
    bp = fld.profile.breakpoints
    nl = fld.profile.n_layers
    y_nodes = [fld._height_in_layer(min(i, nl - 1), xs, np.full_like(xs, bp[i]), layers) - d for i in range(nl + 1)]
    y_nodes[0] = np.full_like(xs, -d)
    psi = np.zeros_like(xs)
    ys, psis, dpsis, segs = [], [], [], []
    count = 0
    for i in range(nl - 1, -1, -1):
        top, bot = y_nodes[i + 1], y_nodes[i]
        hstep = (bot - top) / steps

        def f(p_neg):
            return -1.0 / fld._hp_in_layer(i, xs, -p_neg, layers)

        y = top.copy()
        seg_y = np.empty((steps + 1, len(xs)))
        seg_psi = np.empty_like(seg_y)
        seg_d = np.empty_like(seg_y)
        seg_y[0], seg_psi[0] = y, psi
        seg_d[0] = f(psi)
        for n in range(steps):
            k1 = seg_d[n]
            k2 = f(psi + 0.5 * hstep * k1)
            k3 = f(psi + 0.5 * hstep * k2)
            k4 = f(psi + hstep * k3)
            psi = psi + hstep * (k1 + 2 * k2 + 2 * k3 + k4) / 6
            seg_y[n + 1] = top + (n + 1) * hstep
            seg_psi[n + 1] = psi
            seg_d[n + 1] = f(psi)
        seg_y[-1] = bot
        start = 0 if not ys else 1
        ys.append(seg_y[start:])
        psis.append(seg_psi[start:])
        dpsis.append(seg_d[start:])
        segs.append(slice(count - (1 if start else 0), count + steps + 1 - start))
        count += steps + 1 - start
    Y, P, D = np.concatenate(ys), np.concatenate(psis), np.concatenate(dpsis)
    return [
        StreamSample(float(x), Y[:, j].copy(), P[:, j].copy(), D[:, j].copy(), tuple(segs), fld.profile.p0)
        for j, x in enumerate(xs)
    ]


def stream_function(fld: WaveField, x: float, *, steps: int = 1000) -> StreamSample:
    return stream_rays(fld, [x], steps=steps)[0]


@dataclass
class PhysicalSample:
    """Velocities and pressure along the ray at ``x``.

    Pressure is fixed so that the surface pressure at the crest equals minus
    surface tension times curvature (atmospheric pressure taken as 0).
    """

    x: float
    y: np.ndarray
    psi: np.ndarray
    u_minus_c: np.ndarray
    v: np.ndarray
    pressure: np.ndarray
    surface_pressure_residual: float


def _bernoulli_constant(fld: WaveField) -> float:
    layers = _Layers(fld.profile, fld.lam)
    nl = fld.profile.n_layers
    hp = float(fld._hp_in_layer(nl - 1, np.array(0.0), np.array(0.0), layers))
    _, eta2 = fld.eta_derivatives(0.0)
    kappa = float(eta2)
    speed2 = 1.0 / hp**2
    return -fld.constants.sigma * kappa + 0.5 * speed2 + fld.constants.g * float(fld.eta(0.0))


def physical_fields(
    fld: WaveField, x: float, *, dx: Optional[float] = None, steps: int = 1000
) -> PhysicalSample:
    """(u - c, v, P) along the ray at x; v = -psi_x from the rays at x +/- dx."""
    if dx is None:
        dx = 1e-3 * fld.period
    centre, left, right = stream_rays(fld, [x, x - dx, x + dx], steps=steps)
    y = centre.y
    umc = centre.psi_y
    v = -(right.at(y) - left.at(y)) / (2 * dx)
    gam = fld.profile.big_gamma(np.clip(-centre.psi, fld.profile.p0, 0.0))
    B = _bernoulli_constant(fld)
    P = B - 0.5 * (umc**2 + v**2) - fld.constants.g * y - gam
    e1, e2 = fld.eta_derivatives(x)
    kappa = float(e2 / (1 + e1**2) ** 1.5)
    surf = float(P[0] + fld.constants.sigma * kappa)
    return PhysicalSample(float(x), y, centre.psi, umc, v, P, surf)


def vorticity_check(
    fld: WaveField, x: float, y: float, *, delta: float = 1e-2, steps: int = 1000
) -> tuple:
    """(psi_xx + psi_yy by centred differences, gamma(-psi)) at (x, y)."""
    rays = stream_rays(fld, [x, x - delta, x + delta], steps=steps)
    c, lft, rgt = rays
    yy = np.array([y - delta, y, y + delta])
    pc = c.at(yy)
    psi_yy = (pc[0] - 2 * pc[1] + pc[2]) / delta**2
    psi_xx = (float(lft.at(y)) - 2 * pc[1] + float(rgt.at(y))) / delta**2
    p = min(max(-pc[1], fld.profile.p0), 0.0)
    return float(psi_xx + psi_yy), float(fld.profile.gamma_at(p))
