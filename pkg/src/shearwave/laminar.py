"""Laminar shear flows: b(p) = sqrt(lambda - 2 Gamma(p)), heights and total head.

All integrals over the profile are evaluated layer by layer in closed form.
Within a layer db/dp = -gamma/b, so

    int 1/b   dp = (b(lower) - b(upper)) / gamma
    int 1/b^3 dp = (1/b(upper) - 1/b(lower)) / gamma

with the constant-coefficient limits used when |gamma| < GAMMA_EPS.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import GAMMA_EPS, PhysicalConstants, VorticityProfile


def _inv_b_integral(gamma, b_lo, b_hi, p_lo, p_hi):
    """int_{p_lo}^{p_hi} 1/b dp on a single layer."""
    if abs(gamma) < GAMMA_EPS:
        return (p_hi - p_lo) / b_hi
    return (b_lo - b_hi) / gamma


def _inv_b3_integral(gamma, b_lo, b_hi, p_lo, p_hi):
    """int_{p_lo}^{p_hi} 1/b^3 dp on a single layer."""
    if abs(gamma) < GAMMA_EPS:
        return (p_hi - p_lo) / b_hi**3
    return (1.0 / b_hi - 1.0 / b_lo) / gamma


@dataclass(frozen=True)
class LaminarFlow:
    """A vorticity profile together with the squared surface speed ``lam``."""

    profile: VorticityProfile
    lam: float

    def __post_init__(self):
        floor = 2.0 * self.profile.gamma_sup()
        if not np.isfinite(self.lam) or not self.lam > floor:
            raise DomainError(f"lambda={self.lam} must exceed 2*max(Gamma)={floor}")

    def b(self, p):
        """Relative horizontal speed c - u of the laminar flow, as a function of p."""
        val = np.sqrt(self.lam - 2.0 * self.profile.big_gamma(p))
        return float(val) if np.ndim(val) == 0 else val

    def b_nodes(self) -> np.ndarray:
        """b at every breakpoint."""
        return np.sqrt(self.lam - 2.0 * np.asarray(self.profile.gamma_nodes))

    def height(self, p):
        """H(p) = int_{p0}^p 1/b, the laminar streamline height above the bed."""
        p_arr = np.atleast_1d(self.profile._check(p))
        bp = np.asarray(self.profile.breakpoints)
        gam = np.asarray(self.profile.vorticities)
        bn = self.b_nodes()
        cum = np.concatenate(([0.0], np.cumsum(self.layer_thicknesses())))
        idx = np.atleast_1d(self.profile.layer_index(p_arr))
        bpp = np.atleast_1d(self.b(p_arr))
        gi = gam[idx]
        flat = np.abs(gi) < GAMMA_EPS
        safe = np.where(flat, 1.0, gi)
        inner = np.where(flat, (p_arr - bp[idx]) / bpp, (bn[idx] - bpp) / safe)
        out = cum[idx] + inner
        return float(out[0]) if np.ndim(p) == 0 else out

    def layer_thicknesses(self) -> np.ndarray:
        bp = self.profile.breakpoints
        bn = self.b_nodes()
        return np.array(
            [
                _inv_b_integral(g, bn[i], bn[i + 1], bp[i], bp[i + 1])
                for i, g in enumerate(self.profile.vorticities)
            ]
        )

    def depth(self) -> float:
        return float(np.sum(self.layer_thicknesses()))

    def inv_b3_integral(self) -> float:
        """int_{p0}^0 b^{-3} dp."""
        bp = self.profile.breakpoints
        bn = self.b_nodes()
        return float(
            sum(
                _inv_b3_integral(g, bn[i], bn[i + 1], bp[i], bp[i + 1])
                for i, g in enumerate(self.profile.vorticities)
            )
        )

    def inv_b3_cumulative(self, p):
        """int_{p0}^p b^{-3} ds, exact per layer."""
        p_arr = np.atleast_1d(self.profile._check(p))
        bp = np.asarray(self.profile.breakpoints)
        gam = np.asarray(self.profile.vorticities)
        bn = self.b_nodes()
        per_layer = [
            _inv_b3_integral(g, bn[i], bn[i + 1], bp[i], bp[i + 1])
            for i, g in enumerate(gam)
        ]
        cum = np.concatenate(([0.0], np.cumsum(per_layer)))
        idx = np.atleast_1d(self.profile.layer_index(p_arr))
        bpp = np.atleast_1d(self.b(p_arr))
        gi = gam[idx]
        flat = np.abs(gi) < GAMMA_EPS
        safe = np.where(flat, 1.0, gi)
        inner = np.where(flat, (p_arr - bp[idx]) / bpp**3, (1.0 / bpp - 1.0 / bn[idx]) / safe)
        out = cum[idx] + inner
        return float(out[0]) if np.ndim(p) == 0 else out

    def total_head(self, g: float) -> float:
        """Q(lambda) = lambda + 2 g d."""
        return self.lam + 2.0 * g * self.depth()

    def surface_speed(self) -> float:
        return float(np.sqrt(self.lam))

    def surface_residual(self, g: float, Q: float | None = None) -> float:
        """1 + (2 g H(0) - Q) H'(0)^2; zero exactly when Q = Q(lambda)."""
        if Q is None:
            Q = self.total_head(g)
        return 1.0 + (2.0 * g * self.depth() - Q) / self.lam


def coefficient_b(flow: LaminarFlow, p):
    return flow.b(p)


def laminar_height(flow: LaminarFlow, p):
    return flow.height(p)


def depth(flow: LaminarFlow) -> float:
    return flow.depth()


def layer_thicknesses(flow: LaminarFlow) -> np.ndarray:
    return flow.layer_thicknesses()


def total_head(flow: LaminarFlow, constants: PhysicalConstants | float) -> float:
    g = constants.g if isinstance(constants, PhysicalConstants) else float(constants)
    return flow.total_head(g)


def surface_speed(flow: LaminarFlow) -> float:
    return flow.surface_speed()


def sample(flow: LaminarFlow, per_layer: int) -> np.ndarray:
    """Grid on [p0, 0] with ``per_layer`` intervals per layer; breakpoints are nodes."""
    if per_layer < 1:
        raise DomainError("per_layer must be >= 1")
    pieces = [
        np.linspace(lo, hi, per_layer + 1)[:-1] for lo, hi, _ in flow.profile.layers()
    ]
    pieces.append(np.array([0.0]))
    return np.concatenate(pieces)
