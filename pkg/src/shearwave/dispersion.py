"""Two-layer dispersion relation and the interface Fourier multiplier.

A two-layer laminar flow (vorticities gamma1 below, gamma2 above, thicknesses
d1, d2) admits a bifurcating mode of wavenumber k exactly when the surface speed
x = sqrt(lambda) satisfies

    (gamma2 - gamma1)/(x + gamma2 d2) * (G - x gamma2 - x^2 k coth(k d2))
        = k (coth(k d1) + coth(k d2)) * (G - x gamma2 - x^2 k coth(k d)),

G = g + sigma k^2, d = d1 + d2. Multiplying through by
(x + gamma2 d2) sinh(k d1) sinh(k d2) / (k^2 cosh(k d)) turns it into the monic
cubic x^3 + c2 x^2 + c1 x + c0 used for root finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, SingularSymbolError, ValidationError
from .laminar import LaminarFlow
from .model import PhysicalConstants, VorticityProfile
from . import sturm


@dataclass(frozen=True)
class DispersionInput:
    d1: float
    d2: float
    gamma1: float
    gamma2: float
    g: float
    sigma: float
    k: float

    def __post_init__(self):
        if not (self.d1 > 0 and self.d2 > 0):
            raise ValidationError("layer thicknesses must be positive", field="d1/d2")
        if not self.g > 0:
            raise ValidationError("gravity must be positive", field="g")
        if not self.sigma >= 0:
            raise ValidationError("surface tension must be non-negative", field="sigma")
        if not self.k > 0:
            raise ValidationError("wavenumber must be positive", field="k")

    @property
    def d(self) -> float:
        return self.d1 + self.d2

    @property
    def G(self) -> float:
        return self.g + self.sigma * self.k**2

    @classmethod
    def from_flow(cls, flow: LaminarFlow, constants: PhysicalConstants, k: float):
        if flow.profile.n_layers != 2:
            raise DomainError("the dispersion relation is derived for two layers")
        d1, d2 = flow.layer_thicknesses()
        g1, g2 = flow.profile.vorticities
        return cls(float(d1), float(d2), g1, g2, constants.g, constants.sigma, k)


# -- stable hyperbolic helpers ------------------------------------------------


def coth(x):
    """coth evaluated as 1 + 2/(e^{2x} - 1), with a series branch near 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore"):
        big = 1.0 + 2.0 / np.expm1(2.0 * xs)
    series = 1.0 / np.where(small, x, 1.0) + x / 3.0 - x**3 / 45.0
    out = np.where(small, series, big)
    return float(out) if out.ndim == 0 else out


def _x_coth(theta, k):
    """k coth(theta k), equal to 1/theta at k = 0."""
    k = np.asarray(k, dtype=float)
    t = theta * k
    small = np.abs(t) < 1e-4
    ts = np.where(small, 1.0, t)
    with np.errstate(over="ignore"):
        reg = k * (1.0 + 2.0 / np.expm1(2.0 * ts))
    series = (1.0 + t**2 / 3.0 - t**4 / 45.0) / theta
    return np.where(small, series, reg)


def _sinh_cosh_ratio(a, b):
    """sinh(a) cosh(b) / cosh(a + b) for a, b > 0."""
    return -np.expm1(-2 * a) * (1 + np.exp(-2 * b)) / (2 * (1 + np.exp(-2 * (a + b))))


def _sinh_sinh_ratio(a, b):
    """sinh(a) sinh(b) / sinh(a + b) for a, b > 0."""
    return np.expm1(-2 * a) * np.expm1(-2 * b) / (-2 * np.expm1(-2 * (a + b)))


# -- the two forms of the relation -------------------------------------------


def cubic_coefficients(inp: DispersionInput):
    """(c2, c1, c0) of the monic cubic in x = sqrt(lambda)."""
    k, d1, d2, g1, g2, G = inp.k, inp.d1, inp.d2, inp.gamma1, inp.gamma2, inp.G
    a1, a2 = k * d1, k * d2
    th = math.tanh(k * inp.d)
    ss = _sinh_sinh_ratio(a1, a2)
    c2 = g2 * d2 + (g2 * _sinh_cosh_ratio(a2, a1) + g1 * _sinh_cosh_ratio(a1, a2)) / k
    c1 = th * ((g2**2 * d2 - G) / k + g2 * (g1 - g2) * ss / k**2)
    c0 = G * th / k**2 * ((g2 - g1) * ss - g2 * d2 * k)
    return float(c2), float(c1), float(c0)


def dispersion_residual(x, inp: DispersionInput):
    """Monic cubic evaluated at x = sqrt(lambda)."""
    c2, c1, c0 = cubic_coefficients(inp)
    x = np.asarray(x, dtype=float)
    out = ((x + c2) * x + c1) * x + c0
    return float(out) if out.ndim == 0 else out


def layered_sides(x: float, inp: DispersionInput):
    """Left and right sides of the layered relation at x = sqrt(lambda)."""
    k, g2 = inp.k, inp.gamma2
    lam = x * x
    base = inp.G - x * g2
    lhs = (g2 - inp.gamma1) / (x + g2 * inp.d2) * (base - lam * k * coth(k * inp.d2))
    rhs = k * (coth(k * inp.d1) + coth(k * inp.d2)) * (base - lam * k * coth(k * inp.d))
    return float(lhs), float(rhs)


def layered_residual(x: float, inp: DispersionInput) -> float:
    lhs, rhs = layered_sides(x, inp)
    return lhs - rhs


def layered_scale(x: float, inp: DispersionInput) -> float:
    """Magnitude of the individual terms, for relative residual tests."""
    k, g2 = inp.k, inp.gamma2
    lam = x * x
    mag = abs(inp.G) + abs(x * g2)
    left = abs(g2 - inp.gamma1) / abs(x + g2 * inp.d2) * (mag + lam * k * coth(k * inp.d2))
    right = k * (coth(k * inp.d1) + coth(k * inp.d2)) * (mag + lam * k * coth(k * inp.d))
    return float(left + right)


def cleared_layered(x: float, inp: DispersionInput) -> float:
    """Layered relation multiplied by the factor that turns it into the cubic."""
    k = inp.k
    factor = (
        (x + inp.gamma2 * inp.d2)
        * _sinh_sinh_ratio(k * inp.d1, k * inp.d2)
        * math.tanh(k * inp.d)
        / k**2
    )
    return float(factor * layered_residual(x, inp))


# -- cubic roots ----------------------------------------------------------------


def cubic_real_roots(a: float, b: float, c: float) -> list:
    """Real roots of x^3 + a x^2 + b x + c by the depressed-cubic closed form."""
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if p == 0.0 and q == 0.0:
        ts = [0.0]
    elif disc > 0.0:
        # one real root; pick the cube root without cancellation
        u = np.cbrt(-q / 2.0 - math.copysign(math.sqrt(disc), q))
        ts = [u - p / (3.0 * u)]
    else:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)
        phi = math.acos(min(1.0, max(-1.0, arg))) / 3.0
        ts = [r * math.cos(phi - 2.0 * math.pi * j / 3.0) for j in range(3)]
    return sorted(float(t - shift) for t in ts)


def _polish(f, r, rtol=1e-12):
    delta = 1e-8 * max(1.0, abs(r))
    for _ in range(8):
        lo, hi = r - delta, r + delta
        flo, fhi = f(lo), f(hi)
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if flo * fhi < 0.0:
            break
        delta *= 4.0
    else:
        return r
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * max(1.0, abs(mid)) or mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def admissible(x: float, inp: DispersionInput) -> bool:
    """True when the laminar speed stays positive at the interface and the bed."""
    b1 = x + inp.gamma2 * inp.d2
    return x > 0 and b1 > 0 and b1 + inp.gamma1 * inp.d1 > 0


def solve_dispersion(inp: DispersionInput, *, physical: bool = False) -> list:
    """Positive roots x = sqrt(lambda) of the dispersion relation.

    Roots of the cubic at x = -gamma2 d2 are dropped: there the multiplier that
    cleared the denominator vanishes and the layered relation is undefined. With
    ``physical=True`` roots giving a non-positive laminar speed anywhere are
    dropped too.
    """
    c2, c1, c0 = cubic_coefficients(inp)

    def f(x):
        return ((x + c2) * x + c1) * x + c0

    out = []
    for r in cubic_real_roots(c2, c1, c0):
        r = _polish(f, r)
        if not r > 0:
            continue
        if abs(r + inp.gamma2 * inp.d2) <= 1e-9 * max(1.0, abs(r)):
            continue
        if physical and not admissible(r, inp):
            continue
        if any(abs(r - s) <= 1e-12 * max(1.0, r) for s in out):
            continue
        out.append(r)
    return sorted(out)


def special_case_equal_vorticity(gamma: float, d: float, k: float, g: float, sigma: float) -> float:
    """Relative crest speed c - u(0) over a single linearly sheared current."""
    if not d > 0:
        raise DomainError("depth must be positive")
    t = math.tanh(k * d) / k
    G = g + sigma * k * k
    root = math.sqrt(gamma * gamma * t * t / 4.0 + G * t)
    if gamma >= 0:
        # same value as -gamma t/2 + root, written without cancellation
        return G * t / (gamma * t / 2.0 + root)
    return -gamma * t / 2.0 + root


def irrotational_speed(d: float, k: float, g: float, sigma: float) -> float:
    return math.sqrt((g + sigma * k * k) * math.tanh(k * d) / k)


# -- interface multiplier -------------------------------------------------------


@dataclass(frozen=True)
class MultiplierSymbolInput:
    a_p1: float
    gamma1: float
    gamma2: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if not self.a_p1 > 0:
            raise ValidationError("a(p1) must be positive", field="a_p1")
        if not (self.theta1 > 0 and self.theta2 > 0):
            raise ValidationError("theta1, theta2 must be positive", field="theta")

    @classmethod
    def from_flow(cls, flow: LaminarFlow):
        if flow.profile.n_layers != 2:
            raise DomainError("the interface multiplier is defined for two layers")
        d1, d2 = flow.layer_thicknesses()
        g1, g2 = flow.profile.vorticities
        return cls(float(flow.b_nodes()[1]), g1, g2, float(d1), float(d2))


def multiplier_symbol(inp: MultiplierSymbolInput, k):
    """Symbol of the map (jump of z_p at the interface) -> (trace of z there)."""
    k_arr = np.abs(np.asarray(k, dtype=float))
    a = inp.a_p1
    terms = _x_coth(inp.theta1, k_arr) + _x_coth(inp.theta2, k_arr)
    den = inp.gamma1 - inp.gamma2 + a * terms
    scale = abs(inp.gamma1 - inp.gamma2) + a * terms
    if np.any(np.abs(den) < 1e-12 * scale):
        raise SingularSymbolError("multiplier denominator vanishes", operation="multiplier_symbol")
    out = a * a / den
    return float(out) if out.ndim == 0 else out


def symbol_table(inp: MultiplierSymbolInput, k_max: int):
    """k, lambda_k, k lambda_k and k^2 (lambda_{k+1} - lambda_k) for 1 <= k <= k_max."""
    k = np.arange(1, k_max + 2, dtype=float)
    lam = multiplier_symbol(inp, k)
    ks = k[:-1]
    return ks, lam[:-1], ks * lam[:-1], ks**2 * np.diff(lam)


def symbol_decay_check(inp: MultiplierSymbolInput, K: int):
    """(max_k |k lambda_k|, max_k |k^2 (lambda_{k+1} - lambda_k)|) over 1 <= k <= K."""
    if K < 2:
        raise DomainError("K must be >= 2")
    _, _, kl, diff = symbol_table(inp, K)
    return float(np.max(np.abs(kl))), float(np.max(np.abs(diff)))


# -- cross-validation against the shooting formulation -------------------------


@dataclass
class DispersionCheck:
    k: float
    found: bool
    lambda_star: Optional[float] = None
    xi_value: Optional[float] = None
    xi_scale: Optional[float] = None
    d1: Optional[float] = None
    d2: Optional[float] = None
    layered_residual: Optional[float] = None
    layered_scale: Optional[float] = None
    cubic_roots: tuple = ()
    root_rel_err: Optional[float] = None


def dispersion_vs_shooting(
    profile: VorticityProfile,
    constants: PhysicalConstants,
    k: float,
    *,
    steps: int = sturm.DEFAULT_STEPS,
) -> DispersionCheck:
    """Root of xi(., k^2) fed through the layered relation and the cubic."""
    if profile.n_layers != 2:
        raise DomainError("dispersion_vs_shooting needs a two-layer profile")
    mu = float(k) ** 2
    lam = sturm.find_xi_root(profile, constants, mu, steps=steps)
    if lam is None:
        return DispersionCheck(k=k, found=False)
    shot = sturm.shoot_left(profile, constants, lam, mu, steps=steps)
    # terms of xi = w(0) - (g + sigma mu) z(0)
    xi_scale = abs(shot.w[-1]) + (constants.g + constants.sigma * mu) * abs(shot.z[-1])
    inp = DispersionInput.from_flow(LaminarFlow(profile, lam), constants, k)
    x = math.sqrt(lam)
    roots = solve_dispersion(inp)
    rel = min((abs(r - x) / x for r in roots), default=None)
    return DispersionCheck(
        k=k,
        found=True,
        lambda_star=lam,
        xi_value=shot.xi,
        xi_scale=xi_scale,
        d1=inp.d1,
        d2=inp.d2,
        layered_residual=layered_residual(x, inp),
        layered_scale=layered_scale(x, inp),
        cubic_roots=tuple(roots),
        root_rel_err=rel,
    )
