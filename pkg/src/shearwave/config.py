"""Run configuration: JSON files validated against a schema before any work."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import jsonschema

from .errors import ValidationError
from .model import PhysicalConstants, VorticityProfile
from .sturm import DEFAULT_STEPS

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["profile", "gravity"],
    "properties": {
        "name": {"type": "string"},
        "profile": {
            "type": "object",
            "additionalProperties": False,
            "required": ["breakpoints", "vorticities"],
            "properties": {
                "breakpoints": {"type": "array", "minItems": 2, "items": {"type": "number"}},
                "vorticities": {"type": "array", "minItems": 1, "items": {"type": "number"}},
            },
        },
        "gravity": {"type": "number", "exclusiveMinimum": 0},
        "surface_tension": {"type": "number", "minimum": 0},
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "steps_per_layer": {"type": "integer", "minimum": 10},
                "root_rtol": {"type": "number", "exclusiveMinimum": 0, "maximum": 1e-3},
            },
        },
        "output_dir": {"type": "string"},
    },
}


@dataclass(frozen=True)
class RunConfig:
    profile: VorticityProfile
    constants: PhysicalConstants
    steps: int = DEFAULT_STEPS
    root_rtol: float = 1e-10
    output_dir: Optional[str] = None
    name: str = ""
    digest: str = ""


def config_hash(data: dict) -> str:
    """sha256 of the canonical JSON form (sorted keys, no whitespace)."""
    text = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def from_dict(data) -> RunConfig:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise ValidationError(f"{where}: {exc.message}", field=where) from None
    profile = VorticityProfile.from_dict(data["profile"])
    constants = PhysicalConstants(float(data["gravity"]), float(data.get("surface_tension", 0.0)))
    solver = data.get("solver", {})
    return RunConfig(
        profile=profile,
        constants=constants,
        steps=int(solver.get("steps_per_layer", DEFAULT_STEPS)),
        root_rtol=float(solver.get("root_rtol", 1e-10)),
        output_dir=data.get("output_dir"),
        name=data.get("name", ""),
        digest=config_hash(data),
    )


def load(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read config ({exc.strerror})", field="config") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})", field="config"
        ) from None
    return from_dict(data)


def shipped_configs() -> list:
    """Paths of the example configurations bundled with the package."""
    here = Path(__file__).parent / "configs"
    return sorted(here.glob("*.json"))
