"""Shooting solver for the Sturm-Liouville reduction of the linearised problem.

For fixed ``(lam, mu)`` the kernel of the linearised operator is governed by

    (b^3 z')' - mu b z = 0   on (p0, 0),     b = sqrt(lam - 2 Gamma(p)),

with z(p0) = 0 and the surface condition (g + sigma mu) z(0) = lam^{3/2} z'(0).
The bifurcation function is ``xi = lam^{3/2} z'(0) - (g + sigma mu) z(0)`` for the
solution shot from the bed with z'(p0) = 1. Everything here is integrated in the
flux variables (z, w = b^3 z') with classical RK4, layer by layer, so the
coefficient kinks at the breakpoints never fall inside a step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from . import _rk4
from .errors import DomainError, InfeasibleModeError, NumericError
from .laminar import LaminarFlow
from .model import PhysicalConstants, VorticityProfile

DEFAULT_STEPS = 2000
ROOT_RTOL = 1e-10
_MAX_DOUBLINGS = 200


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------


@dataclass
class ShootingResult:
    """Sampled trajectory of one shot.

    ``raw`` holds the integrated state (columns z, w[, z_mu, w_mu, z_lam, w_lam])
    up to the factor ``exp(log_scale)``; the properties return true values.
    Samples are stored in ascending ``p`` for both shooting directions.
    """

    lam: float
    mu: float
    direction: str
    p: np.ndarray
    b: np.ndarray
    raw: np.ndarray
    log_scale: np.ndarray
    layer_starts: tuple
    xi: Optional[float] = None

    def _col(self, i):
        if i >= self.raw.shape[1]:
            raise AttributeError("variational states were not integrated for this shot")
        if not np.any(self.log_scale):
            return self.raw[:, i]
        with np.errstate(over="ignore"):
            return self.raw[:, i] * np.exp(self.log_scale)

    @property
    def z(self):
        return self._col(0)

    @property
    def w(self):
        return self._col(1)

    @property
    def dz(self):
        """z' = w / b^3."""
        return self.w / self.b**3

    @property
    def z_mu(self):
        return self._col(2)

    @property
    def w_mu(self):
        return self._col(3)

    @property
    def z_lam(self):
        return self._col(4)

    @property
    def w_lam(self):
        return self._col(5)

    @property
    def has_variations(self) -> bool:
        return self.raw.shape[1] == 6

    def layer_slices(self):
        """Index slices of each layer; neighbouring slices share the breakpoint sample."""
        starts = list(self.layer_starts) + [len(self.p) - 1]
        return [slice(starts[i], starts[i + 1] + 1) for i in range(len(starts) - 1)]

    def samples(self):
        """List of ``(p, z, w)`` triples."""
        return list(zip(self.p.tolist(), self.z.tolist(), self.w.tolist()))


def _check_params(profile: VorticityProfile, lam: float, mu: float):
    floor = 2.0 * profile.gamma_sup()
    if not np.isfinite(lam) or not lam > floor:
        raise DomainError(f"lambda={lam} must exceed 2*max(Gamma)={floor}")
    if not np.isfinite(mu) or mu < 0:
        raise DomainError(f"mu={mu} must be a finite non-negative number")


def _half_nodes(profile, lam, lo, hi, gamma, steps):
    """p and b at the 2*steps+1 RK4 half-step nodes of the layer [lo, hi]."""
    p = lo + (hi - lo) * np.arange(2 * steps + 1) / (2 * steps)
    gam_hi = profile.big_gamma(hi)
    b = np.sqrt(lam - 2.0 * (gam_hi + gamma * (p - hi)))
    return p, b


def _shoot(profile, lam, mu, y0, direction, steps):
    layers = list(profile.layers())
    if direction == "right":
        layers = layers[::-1]
    m = len(y0)
    p_parts, b_parts, y_parts, l_parts = [], [], [], []
    y = np.asarray(y0, dtype=float)
    logs = 0.0
    for lo, hi, gamma in layers:
        p, b = _half_nodes(profile, lam, lo, hi, gamma, steps)
        h = (hi - lo) / steps
        if direction == "right":
            p, b, h = p[::-1].copy(), b[::-1].copy(), -h
        out = np.empty((steps + 1, m))
        log_out = np.empty(steps + 1)
        ok = _rk4.integrate_layer(b, h, float(mu), y, logs, out, log_out)
        if not ok:
            raise NumericError(
                "shooting state became non-finite",
                operation=f"shoot_{direction}",
                params={"lambda": lam, "mu": mu, "layer": (lo, hi)},
            )
        start = 0 if not p_parts else 1
        p_parts.append(p[::2][start:])
        b_parts.append(b[::2][start:])
        y_parts.append(out[start:])
        l_parts.append(log_out[start:])
        y = out[-1].copy()
        logs = float(log_out[-1])
    p = np.concatenate(p_parts)
    b = np.concatenate(b_parts)
    raw = np.concatenate(y_parts)
    log_scale = np.concatenate(l_parts)
    if direction == "right":
        p, b, raw, log_scale = p[::-1], b[::-1], raw[::-1], log_scale[::-1]
    starts = tuple(i * steps for i in range(len(layers)))
    return p, b, np.ascontiguousarray(raw), np.ascontiguousarray(log_scale), starts


def _scaled_value(raw_value: float, log_scale: float) -> float:
    if raw_value == 0.0 or log_scale == 0.0:
        return raw_value
    if log_scale + math.log(abs(raw_value)) > 709.0:
        return math.copysign(math.inf, raw_value)
    return raw_value * math.exp(log_scale)


def shoot_left(
    profile: VorticityProfile,
    constants: PhysicalConstants,
    lam: float,
    mu: float,
    *,
    steps: int = DEFAULT_STEPS,
    variational: bool = False,
) -> ShootingResult:
    """Shoot from the bed with z(p0) = 0, z'(p0) = 1.

    With ``variational=True`` the mu- and lambda-derivatives of the trajectory
    are integrated in the same augmented state.
    """
    _check_params(profile, lam, mu)
    b0 = math.sqrt(lam - 2.0 * profile.big_gamma(profile.p0))
    y0 = [0.0, b0**3]
    if variational:
        y0 += [0.0, 0.0, 0.0, 1.5 * b0]
    p, b, raw, log_scale, starts = _shoot(profile, lam, mu, y0, "left", steps)
    coef = constants.g + constants.sigma * mu
    xi = _scaled_value(raw[-1, 1] - coef * raw[-1, 0], log_scale[-1])
    return ShootingResult(lam, mu, "left", p, b, raw, log_scale, starts, xi)


def shoot_right(
    profile: VorticityProfile,
    constants: PhysicalConstants,
    lam: float,
    mu: float,
    *,
    steps: int = DEFAULT_STEPS,
) -> ShootingResult:
    """Shoot from the surface with v(0) = lam^{3/2}, v'(0) = g + sigma mu."""
    _check_params(profile, lam, mu)
    top = lam**1.5
    y0 = [top, top * (constants.g + constants.sigma * mu)]
    p, b, raw, log_scale, starts = _shoot(profile, lam, mu, y0, "right", steps)
    return ShootingResult(lam, mu, "right", p, b, raw, log_scale, starts, None)


def xi(profile, constants, lam, mu, *, steps=DEFAULT_STEPS) -> float:
    """Bifurcation function: its zeros are the (lam, mu) with a nontrivial kernel."""
    return shoot_left(profile, constants, lam, mu, steps=steps).xi


def xi_wronskian(profile, constants, lam, mu, *, steps=DEFAULT_STEPS) -> float:
    """Xi recovered from the surface shot.

    b^3 (v z' - z v') is constant on [p0, 0]; evaluating it at both ends gives
    lam^{3/2} xi = b(p0)^3 v(p0).
    """
    right = shoot_right(profile, constants, lam, mu, steps=steps)
    b0 = right.b[0]
    raw = right.raw[0, 0] * b0**3 / lam**1.5
    return _scaled_value(raw, right.log_scale[0])


def xi_mu(profile, constants, lam, mu, *, steps=DEFAULT_STEPS) -> float:
    """d xi / d mu from the variational states."""
    r = shoot_left(profile, constants, lam, mu, steps=steps, variational=True)
    s, g = constants.sigma, constants.g
    raw = r.raw[-1]
    val = raw[3] - s * raw[0] - (g + s * mu) * raw[2]
    return _scaled_value(val, r.log_scale[-1])


@dataclass(frozen=True)
class XiLambda:
    """Two evaluations of d xi / d lambda.

    ``ode`` comes from the variational system. ``integral`` comes from the
    integration-by-parts identity

        z(0) xi_lam = int (3b/2 z'^2 + mu/(2b) z^2) dp + z_lam(0) xi,

    whose last term vanishes at zeros of xi; it is None when z(0) = 0.
    """

    ode: float
    integral: Optional[float]


def _layer_quad(result: ShootingResult, values: np.ndarray) -> float:
    return float(sum(simpson(values[sl], x=result.p[sl]) for sl in result.layer_slices()))


def xi_lambda(profile, constants, lam, mu, *, steps=DEFAULT_STEPS) -> XiLambda:
    r = shoot_left(profile, constants, lam, mu, steps=steps, variational=True)
    coef = constants.g + constants.sigma * mu
    raw = r.raw[-1]
    ode = _scaled_value(raw[5] - coef * raw[4], r.log_scale[-1])
    z, dz, b = r.z, r.dz, r.b
    z_top = z[-1]
    if z_top == 0.0 or not np.isfinite(z_top):
        return XiLambda(ode, None)
    energy = _layer_quad(r, 1.5 * b * dz**2 + mu * z**2 / (2.0 * b))
    integral = (energy + r.z_lam[-1] * r.xi) / z_top
    return XiLambda(ode, float(integral))


def integral_relation_residual(result: ShootingResult) -> float:
    """Picard-form consistency of a left shot.

    Returns max |z - int b0^3/b^3 - mu int (1/b^3) int b z| / max |z| with the
    integrals taken by per-layer cumulative Simpson quadrature.
    """
    if result.direction != "left":
        raise DomainError("integral relation applies to the bed shot only")
    p, b, z = result.p, result.b, result.z
    b0 = b[0]
    inner = np.zeros_like(p)
    first = np.zeros_like(p)
    outer = np.zeros_like(p)
    for sl in result.layer_slices():
        idx = np.arange(len(p))[sl]
        off_inner = inner[idx[0]]
        inner[idx] = off_inner + cumulative_simpson(b[sl] * z[sl], x=p[sl], initial=0.0)
    for sl in result.layer_slices():
        idx = np.arange(len(p))[sl]
        first[idx] = first[idx[0]] + cumulative_simpson(
            b0**3 / b[sl] ** 3, x=p[sl], initial=0.0
        )
        outer[idx] = outer[idx[0]] + cumulative_simpson(
            inner[sl] / b[sl] ** 3, x=p[sl], initial=0.0
        )
    resid = z - first - result.mu * outer
    return float(np.max(np.abs(resid)) / np.max(np.abs(z)))


# ---------------------------------------------------------------------------
# analytic oracle on a constant-vorticity layer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticLayerSolution:
    """z = (2 gamma / b) (beta e^{-k (b - b_ref)/gamma} + delta e^{k (b - b_ref)/gamma}).

    This is the closed-form general solution of (b^3 z')' = mu b z on a layer of
    constant vorticity ``gamma`` != 0, with k = sqrt(mu). The exponent is shifted
    by ``b_ref`` (b at the lower end) only to keep it O(1); the family is unchanged.
    """

    gamma: float
    mu: float
    p_lo: float
    p_hi: float
    b_hi: float
    b_ref: float
    beta: float
    delta: float

    def b(self, p):
        return np.sqrt(self.b_hi**2 + 2.0 * self.gamma * (self.p_hi - np.asarray(p, dtype=float)))

    def _parts(self, p):
        b = self.b(p)
        kap = math.sqrt(self.mu) / self.gamma
        em = np.exp(-kap * (b - self.b_ref))
        ep = np.exp(kap * (b - self.b_ref))
        return b, kap, em, ep

    def z(self, p):
        b, _, em, ep = self._parts(p)
        return (2.0 * self.gamma / b) * (self.beta * em + self.delta * ep)

    def dz(self, p):
        b, kap, em, ep = self._parts(p)
        e = self.beta * em + self.delta * ep
        de_db = kap * (-self.beta * em + self.delta * ep)
        dz_db = 2.0 * self.gamma * (-e / b**2 + de_db / b)
        return dz_db * (-self.gamma / b)

    def w(self, p):
        return self.b(p) ** 3 * self.dz(p)


def analytic_layer_solution(
    gamma: float,
    mu: float,
    p_lo: float,
    p_hi: float,
    b_hi: float,
    z_a: float,
    dz_a: float,
    p_a: Optional[float] = None,
) -> AnalyticLayerSolution:
    """Fit the closed-form layer solution to z(p_a) = z_a, z'(p_a) = dz_a.

    ``b_hi`` is b at the upper end of the layer; ``p_a`` defaults to ``p_lo``.
    """
    if gamma == 0.0:
        raise DomainError("analytic layer solution needs gamma != 0")
    if mu < 0:
        raise DomainError("mu must be non-negative")
    if p_a is None:
        p_a = p_lo
    b_lo2 = b_hi**2 + 2.0 * gamma * (p_hi - p_lo)
    if b_hi <= 0 or b_lo2 <= 0:
        raise DomainError("b must stay positive on the layer")
    b_ref = math.sqrt(b_lo2)
    basis = [
        AnalyticLayerSolution(gamma, mu, p_lo, p_hi, b_hi, b_ref, 1.0, 0.0),
        AnalyticLayerSolution(gamma, mu, p_lo, p_hi, b_hi, b_ref, 0.0, 1.0),
    ]
    mat = np.array([[f.z(p_a) for f in basis], [f.dz(p_a) for f in basis]], dtype=float)
    if not np.all(np.isfinite(mat)) or np.linalg.cond(mat) > 1e13:
        raise NumericError(
            "singular 2x2 system for the layer coefficients",
            operation="analytic_layer_solution",
            params={"gamma": gamma, "mu": mu},
        )
    beta, delta = np.linalg.solve(mat, [z_a, dz_a])
    return AnalyticLayerSolution(gamma, mu, p_lo, p_hi, b_hi, b_ref, float(beta), float(delta))


# ---------------------------------------------------------------------------
# lambda0, the surface-tension condition, mu(lambda)
# ---------------------------------------------------------------------------


def _bisect(on_low_side, lo, hi, rtol, max_iter=400):
    """Shrink [lo, hi] around the switch of a monotone predicate."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * max(1.0, abs(mid)) or mid in (lo, hi):
            break
        if on_low_side(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def lambda0(profile: VorticityProfile, constants: PhysicalConstants) -> float:
    """Unique lambda with int_{p0}^0 b^{-3} dp = 1/g."""
    target = 1.0 / constants.g
    floor = 2.0 * profile.gamma_sup()

    def excess(lam):
        return LaminarFlow(profile, lam).inv_b3_integral() - target

    offset = 1.0
    while excess(floor + offset) >= 0.0:
        offset *= 2.0
    hi = floor + offset
    lo = floor if offset == 1.0 else floor + offset / 2.0
    # bisect to full double precision; each evaluation is closed form
    lo, hi = _bisect(lambda lam: lam <= floor or excess(lam) > 0.0, lo, hi, 0.0)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ConditionD2:
    """``lhs`` = int b (int_{p0}^p b^{-3})^2 dp at lambda_0, ``rhs`` = sigma / g^2."""

    holds: bool
    lhs: float
    rhs: float
    lam0: float


def _gauss_layer_integral(func, lo, hi, nodes):
    x, wts = np.polynomial.legendre.leggauss(nodes)
    p = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    return 0.5 * (hi - lo) * float(np.dot(wts, func(p)))


def check_condition_d2(profile: VorticityProfile, constants: PhysicalConstants) -> ConditionD2:
    lam0 = lambda0(profile, constants)
    flow = LaminarFlow(profile, lam0)

    def integrand(p):
        return flow.b(p) * flow.inv_b3_cumulative(p) ** 2

    total = 0.0
    for lo, hi, _ in profile.layers():
        nodes = 64
        prev = _gauss_layer_integral(integrand, lo, hi, nodes)
        while nodes < 4096:
            nodes *= 2
            cur = _gauss_layer_integral(integrand, lo, hi, nodes)
            done = abs(cur - prev) <= 1e-10 * abs(cur)
            prev = cur
            if done:
                break
        total += prev
    rhs = constants.sigma / constants.g**2
    return ConditionD2(total <= rhs, total, rhs, lam0)


def _require_sigma(constants):
    if constants.sigma <= 0:
        raise DomainError("the mu(lambda) curve exists only for positive surface tension")


def _lam0_tol(lam0):
    return ROOT_RTOL * max(1.0, lam0)


def mu_of_lambda(
    profile: VorticityProfile,
    constants: PhysicalConstants,
    lam: float,
    *,
    steps: int = DEFAULT_STEPS,
    lam0: Optional[float] = None,
    check: bool = True,
) -> float:
    """The unique mu >= 0 with xi(lam, mu) = 0 and xi(lam, .) < 0 beyond it."""
    _require_sigma(constants)
    if lam0 is None:
        lam0 = lambda0(profile, constants)
    if lam < lam0 - _lam0_tol(lam0):
        raise DomainError(f"mu(lambda) is defined for lambda >= lambda0={lam0}, got {lam}")
    lam = max(lam, lam0)

    def f(mu):
        return xi(profile, constants, lam, mu, steps=steps)

    hi = 1.0
    for _ in range(_MAX_DOUBLINGS):
        if f(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise NumericError("xi did not turn negative", operation="mu_of_lambda", params={"lambda": lam})
    lo = 0.0 if hi == 1.0 else hi / 2.0
    lo, hi = _bisect(lambda m: f(m) >= 0.0, lo, hi, ROOT_RTOL)
    mu = 0.5 * (lo + hi)
    if check:
        _check_sign_structure(f, mu, lam)
    return mu


def _check_sign_structure(f, mu, lam, probes=16):
    below = [mu * (j + 0.5) / probes for j in range(probes)] if mu > 1e-8 else []
    step = max(mu, 1.0) / probes
    above = [mu + step * (j + 1) for j in range(probes)]
    bad = [m for m in below if not f(m) > 0.0] + [m for m in above if not f(m) < 0.0]
    if bad:
        raise NumericError(
            "sign structure of xi around mu(lambda) violated",
            operation="mu_of_lambda",
            params={"lambda": lam, "mu": mu, "bad_probes": bad[:4]},
        )


def divisor_for(mu0: float) -> int:
    """Smallest positive integer n with n^2 >= mu0."""
    n = max(1, math.ceil(math.sqrt(max(mu0, 0.0))))
    while n > 1 and (n - 1) ** 2 >= mu0:
        n -= 1
    while n * n < mu0:
        n += 1
    return n


def min_period_divisor(
    profile: VorticityProfile, constants: PhysicalConstants, *, steps: int = DEFAULT_STEPS
) -> int:
    lam0 = lambda0(profile, constants)
    mu0 = mu_of_lambda(profile, constants, lam0, steps=steps, lam0=lam0, check=False)
    n = divisor_for(mu0)
    if n != 1 and check_condition_d2(profile, constants).holds:
        raise NumericError(
            "surface-tension condition holds but mu(lambda0) exceeds 1",
            operation="min_period_divisor",
            params={"mu0": mu0},
        )
    return n


# ---------------------------------------------------------------------------
# bifurcation points
# ---------------------------------------------------------------------------


@dataclass
class BifurcationPoint:
    """Laminar flow at which the mode cos(k n q) enters the kernel.

    ``eigenfunction`` is sup-normalised and positive at its largest-magnitude
    sample; ``eigen_slope`` is its p-derivative on the same grid. ``at_lambda0``
    flags the boundary case lambda_k = lambda_0, which is reported but not
    certified as a bifurcation point.
    """

    k: int
    n: int
    wavenumber: int
    lambda_k: float
    profile: VorticityProfile
    constants: PhysicalConstants
    p: np.ndarray
    eigenfunction: np.ndarray
    eigen_slope: np.ndarray
    xi_residual: float
    at_lambda0: bool = False
    steps: int = DEFAULT_STEPS
    layer_starts: tuple = field(default=())

    @property
    def mu(self) -> float:
        return float(self.wavenumber**2)

    @property
    def flow(self) -> LaminarFlow:
        return LaminarFlow(self.profile, self.lambda_k)


def eigenfunction(profile, constants, lam, mu, *, steps=DEFAULT_STEPS):
    """Sup-normalised bed shot at (lam, mu): returns (p, v, v', shot)."""
    r = shoot_left(profile, constants, lam, mu, steps=steps)
    z, dz = r.z, r.dz
    i = int(np.argmax(np.abs(z)))
    scale = z[i]
    return r.p, z / scale, dz / scale, r


def bifurcation_lambda(
    profile: VorticityProfile,
    constants: PhysicalConstants,
    k: int,
    n: Optional[int] = None,
    *,
    steps: int = DEFAULT_STEPS,
) -> BifurcationPoint:
    """Solve mu(lambda_k) = (k n)^2 by bisection in lambda.

    For lambda >= lambda0 the sign of xi(lambda, m) equals the sign of
    mu(lambda) - m, so the bracket is driven by xi directly.
    """
    if k < 1:
        raise DomainError("mode index k must be >= 1")
    _require_sigma(constants)
    if n is None:
        n = min_period_divisor(profile, constants, steps=steps)
    target = float((k * n) ** 2)
    lam0 = lambda0(profile, constants)
    mu0 = mu_of_lambda(profile, constants, lam0, steps=steps, lam0=lam0, check=False)
    tol = ROOT_RTOL * max(1.0, mu0)
    if target < mu0 - tol:
        raise InfeasibleModeError(
            f"(k n)^2 = {target} is below mu(lambda0) = {mu0}; increase n"
        )
    at_lambda0 = abs(target - mu0) <= tol
    if at_lambda0:
        lam_k = lam0
    else:
        lam_k = xi_root_in_lambda(profile, constants, target, steps=steps, lam0=lam0)
    p, v, dv, shot = eigenfunction(profile, constants, lam_k, target, steps=steps)
    return BifurcationPoint(
        k=k,
        n=n,
        wavenumber=k * n,
        lambda_k=lam_k,
        profile=profile,
        constants=constants,
        p=p,
        eigenfunction=v,
        eigen_slope=dv,
        xi_residual=shot.xi,
        at_lambda0=at_lambda0,
        steps=steps,
        layer_starts=shot.layer_starts,
    )


def xi_root_in_lambda(profile, constants, mu, *, steps=DEFAULT_STEPS, lam0=None) -> float:
    """lambda >= lambda0 with xi(lambda, mu) = 0 for a given squared wavenumber."""
    _require_sigma(constants)
    if lam0 is None:
        lam0 = lambda0(profile, constants)

    def f(lam):
        return xi(profile, constants, lam, mu, steps=steps)

    if f(lam0) > 0.0:
        raise InfeasibleModeError(f"mu={mu} lies below mu(lambda0)")
    offset = 1.0
    for _ in range(_MAX_DOUBLINGS):
        if f(lam0 + offset) > 0.0:
            break
        offset *= 2.0
    else:
        raise NumericError("no sign change of xi in lambda", operation="xi_root_in_lambda")
    lo = lam0 if offset == 1.0 else lam0 + offset / 2.0
    lo, hi = _bisect(lambda lam: f(lam) < 0.0, lo, lam0 + offset, ROOT_RTOL)
    return 0.5 * (lo + hi)


def find_xi_root(profile, constants, mu, *, steps=DEFAULT_STEPS) -> Optional[float]:
    """Any lambda in (2 max Gamma, inf) with xi(lambda, mu) = 0, or None.

    Unlike :func:`xi_root_in_lambda` this is not restricted to lambda >= lambda0;
    the bracket is xi < 0 next to the stagnation limit and xi > 0 for large lambda.
    """
    floor = 2.0 * profile.gamma_sup()

    def f(lam):
        return xi(profile, constants, lam, mu, steps=steps)

    hi = None
    offset = 1.0
    for _ in range(60):
        if f(floor + offset) > 0.0:
            hi = floor + offset
            break
        offset *= 2.0
    if hi is None:
        return None
    lo = None
    off = min(offset, 1.0)
    for _ in range(60):
        off *= 0.5
        if f(floor + off) < 0.0:
            lo = floor + off
            break
    if lo is None:
        return None
    lo, hi = _bisect(lambda lam: f(lam) < 0.0, lo, hi, ROOT_RTOL)
    return 0.5 * (lo + hi)
