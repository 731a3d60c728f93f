"""Piecewise-constant vorticity profiles and physical constants."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidationError

# |gamma| below this is treated as zero vorticity in closed-form integrals
GAMMA_EPS = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    """Gravity ``g`` > 0 and surface tension ``sigma`` >= 0."""

    g: float = 9.81
    sigma: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.g) or self.g <= 0:
            raise ValidationError(f"gravity must be positive, got {self.g}", field="g")
        if not np.isfinite(self.sigma) or self.sigma < 0:
            raise ValidationError(
                f"surface tension must be non-negative, got {self.sigma}", field="sigma"
            )


@dataclass(frozen=True, init=False)
class VorticityProfile:
    """Step vorticity on ``[p0, 0]``.

    ``breakpoints`` are ``p0 < p1 < ... < pN = 0`` and ``vorticities[i]`` is the
    constant vorticity of layer ``(breakpoints[i], breakpoints[i+1])``, counted
    from the bed upward.
    """

    breakpoints: tuple
    vorticities: tuple

    def __init__(self, breakpoints: Sequence[float], vorticities: Sequence[float]):
        bp = tuple(float(x) for x in breakpoints)
        gam = tuple(float(x) for x in vorticities)
        if len(bp) < 2:
            raise ValidationError("need at least two breakpoints", field="breakpoints")
        if len(gam) != len(bp) - 1:
            raise ValidationError(
                f"expected {len(bp) - 1} vorticities for {len(bp)} breakpoints, got {len(gam)}",
                field="vorticities",
            )
        for i, x in enumerate(bp):
            if not np.isfinite(x):
                raise ValidationError(f"breakpoint {i} is not finite", index=i, field="breakpoints")
        for i in range(1, len(bp)):
            if not bp[i] > bp[i - 1]:
                raise ValidationError(
                    f"breakpoints must be strictly increasing (entry {i}: {bp[i]} <= {bp[i - 1]})",
                    index=i,
                    field="breakpoints",
                )
        if bp[-1] != 0.0:
            raise ValidationError(
                f"last breakpoint must be exactly 0, got {bp[-1]}",
                index=len(bp) - 1,
                field="breakpoints",
            )
        for i, x in enumerate(gam):
            if not np.isfinite(x):
                raise ValidationError(f"vorticity {i} is not finite", index=i, field="vorticities")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "vorticities", gam)
        # Gamma at each breakpoint, anchored at Gamma(0) = 0 and built top-down
        gb = [0.0] * len(bp)
        for i in range(len(gam) - 1, -1, -1):
            gb[i] = gb[i + 1] + gam[i] * (bp[i] - bp[i + 1])
        object.__setattr__(self, "_gamma_nodes", tuple(gb))

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_dict(cls, data: dict) -> "VorticityProfile":
        if not isinstance(data, dict):
            raise ValidationError("profile must be a JSON object")
        unknown = set(data) - {"breakpoints", "vorticities"}
        if unknown:
            raise ValidationError(f"unknown profile keys: {sorted(unknown)}", field=sorted(unknown)[0])
        for key in ("breakpoints", "vorticities"):
            if key not in data:
                raise ValidationError(f"missing profile key {key!r}", field=key)
            if not isinstance(data[key], list):
                raise ValidationError(f"{key} must be a list", field=key)
            for i, x in enumerate(data[key]):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise ValidationError(f"{key}[{i}] is not a number", index=i, field=key)
        return cls(data["breakpoints"], data["vorticities"])

    @classmethod
    def from_json(cls, text: str) -> "VorticityProfile":
        return cls.from_dict(json.loads(text))

    @classmethod
    def constant(cls, p0: float, gamma: float = 0.0) -> "VorticityProfile":
        return cls((p0, 0.0), (gamma,))

    def to_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "vorticities": list(self.vorticities)}

    # -- basic geometry -------------------------------------------------------
    @property
    def p0(self) -> float:
        return self.breakpoints[0]

    @property
    def n_layers(self) -> int:
        return len(self.vorticities)

    @property
    def gamma_nodes(self) -> tuple:
        """Gamma evaluated at each breakpoint."""
        return self._gamma_nodes

    def layers(self):
        """Yield ``(lower, upper, gamma)`` bottom to top."""
        for i, g in enumerate(self.vorticities):
            yield self.breakpoints[i], self.breakpoints[i + 1], g

    def _check(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(~np.isfinite(p)) or np.any(p < self.p0) or np.any(p > 0.0):
            raise DomainError(f"p must lie in [{self.p0}, 0]")
        return p

    def layer_index(self, p):
        """Layer containing ``p``; a breakpoint belongs to the layer above it."""
        p = self._check(p)
        idx = np.searchsorted(np.asarray(self.breakpoints), p, side="right") - 1
        return np.clip(idx, 0, self.n_layers - 1)

    def gamma_at(self, p):
        """Vorticity at ``p`` (right-continuous at interior breakpoints)."""
        idx = self.layer_index(p)
        out = np.asarray(self.vorticities)[idx]
        return float(out) if np.ndim(out) == 0 else out

    def big_gamma(self, p):
        """Exact antiderivative Gamma(p) = int_0^p gamma(s) ds."""
        p = self._check(p)
        idx = self.layer_index(p)
        gb = np.asarray(self._gamma_nodes)
        bp = np.asarray(self.breakpoints)
        gam = np.asarray(self.vorticities)
        out = gb[idx + 1] + gam[idx] * (p - bp[idx + 1])
        return float(out) if np.ndim(out) == 0 else out

    def gamma_sup(self) -> float:
        """max of Gamma over [p0, 0], attained at a breakpoint."""
        return float(max(self._gamma_nodes))


def gamma_at(profile: VorticityProfile, p):
    return profile.gamma_at(p)


def big_gamma(profile: VorticityProfile, p):
    return profile.big_gamma(p)


def gamma_sup(profile: VorticityProfile) -> float:
    return profile.gamma_sup()
