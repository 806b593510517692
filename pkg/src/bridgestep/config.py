"""Study configuration files (YAML) with strict schema validation.

Example::

    bridges:
      - {span_m: 10, f1_hz: 12}
      - {span_m: 15, f1_hz: 8, damping_ratio: 0.02, mode_count: 7}
    train:
      axle_load_ton: 20
      axle_count: 10
      axle_spacing_m: [13, 17, 23]
    speeds: {start_kmh: 109, step_m_s: 2.5, count: 34}   # or speeds_kmh: [...]
    dt_grid_s: [0.05, 0.025, 0.015, 0.01, 0.005, 0.0025]
    if_tolerance: 0.01
    workers: 4
    output_dir: results

Every top-level key is optional; missing ones fall back to the default
study grid and are reported in ``defaults_used``. Unknown keys are errors.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import yaml

from .calibration import DEFAULT_AXLE_DISTANCES, DEFAULT_DT_GRID, DEFAULT_TOLERANCE, StudyGrid
from .exceptions import BridgeStepError, ConfigurationError
from .structural import DEFAULT_MASS_PER_LENGTH, DEFAULT_MODE_COUNT, GRAVITY, MAX_MODE_COUNT, BridgeSpec

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "bridges": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["span_m", "f1_hz"],
                "properties": {
                    "span_m": _POSITIVE,
                    "f1_hz": _POSITIVE,
                    "damping_ratio": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                    "mode_count": {"type": "integer", "minimum": 1, "maximum": MAX_MODE_COUNT},
                    "mass_per_length_kg_m": _POSITIVE,
                },
            },
        },
        "train": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "axle_load_ton": _POSITIVE,
                "axle_count": {"type": "integer", "minimum": 1},
                "axle_spacing_m": {
                    "oneOf": [_POSITIVE, {"type": "array", "minItems": 1, "items": _POSITIVE}],
                },
            },
        },
        "speeds_kmh": {"type": "array", "minItems": 1, "items": _POSITIVE},
        "speeds": {
            "type": "object",
            "additionalProperties": False,
            "required": ["start_kmh", "step_m_s", "count"],
            "properties": {
                "start_kmh": _POSITIVE,
                "step_m_s": {"type": "number", "minimum": 0},
                "count": {"type": "integer", "minimum": 1},
            },
        },
        "dt_grid_s": {"type": "array", "minItems": 2, "items": _POSITIVE},
        "if_tolerance": _POSITIVE,
        "workers": {"type": "integer", "minimum": 1},
        "output_dir": {"type": "string", "minLength": 1},
    },
    "not": {"required": ["speeds_kmh", "speeds"]},
}

DEFAULTS = {
    "bridges": [
        {"span_m": 10, "f1_hz": 12.0},
        {"span_m": 15, "f1_hz": 8.0},
        {"span_m": 20, "f1_hz": 6.0},
        {"span_m": 25, "f1_hz": 4.8},
    ],
    "train": {"axle_load_ton": 20, "axle_count": 10, "axle_spacing_m": list(DEFAULT_AXLE_DISTANCES)},
    "speeds": {"start_kmh": 109, "step_m_s": 2.5, "count": 34},
    "dt_grid_s": list(DEFAULT_DT_GRID),
    "if_tolerance": DEFAULT_TOLERANCE,
    "output_dir": "results",
}
BRIDGE_DEFAULTS = {
    "damping_ratio": 0.0,
    "mode_count": DEFAULT_MODE_COUNT,
    "mass_per_length_kg_m": DEFAULT_MASS_PER_LENGTH,
}


@dataclass
class StudyConfig:
    data: dict
    defaults_used: list = field(default_factory=list)

    @property
    def speeds_m_s(self) -> list[float]:
        if "speeds_kmh" in self.data:
            return [v / 3.6 for v in self.data["speeds_kmh"]]
        s = self.data["speeds"]
        return [s["start_kmh"] / 3.6 + i * s["step_m_s"] for i in range(s["count"])]

    @property
    def axle_distances_m(self) -> list[float]:
        d = self.data["train"]["axle_spacing_m"]
        return [float(x) for x in (d if isinstance(d, list) else [d])]

    @property
    def workers(self):
        return self.data.get("workers")

    @property
    def output_dir(self) -> str:
        return self.data["output_dir"]

    def to_grid(self) -> StudyGrid:
        try:
            bridges = [BridgeSpec(**b) for b in self.data["bridges"]]
            train = self.data["train"]
            return StudyGrid(
                bridges=bridges,
                axle_distances_m=self.axle_distances_m,
                speeds_m_s=self.speeds_m_s,
                dt_grid_s=[float(x) for x in self.data["dt_grid_s"]],
                if_tolerance=float(self.data["if_tolerance"]),
                axle_load_newton=train["axle_load_ton"] * 1000.0 * GRAVITY,
                axle_count=train["axle_count"],
            )
        except BridgeStepError as exc:
            raise ConfigurationError(str(exc)) from exc

    def config_hash(self) -> str:
        blob = json.dumps(self.data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def parse_config(raw) -> StudyConfig:
    """Validate a mapping against :data:`SCHEMA` and fill in defaults."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigurationError("configuration must be a mapping")
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigurationError(f"{where}: {exc.message}") from None

    data = copy.deepcopy(raw)
    used = []
    for key, value in DEFAULTS.items():
        if key == "speeds" and "speeds_kmh" in data:
            continue
        if key not in data:
            data[key] = copy.deepcopy(value)
            used.append(key)
    for sub, value in DEFAULTS["train"].items():
        if sub not in data["train"]:
            data["train"][sub] = copy.deepcopy(value)
            used.append(f"train.{sub}")
    for i, bridge in enumerate(data["bridges"]):
        for sub, value in BRIDGE_DEFAULTS.items():
            if sub not in bridge:
                bridge[sub] = value
                used.append(f"bridges[{i}].{sub}")
    if data["train"]["axle_count"] > 1 and not data["train"]["axle_spacing_m"]:
        raise ConfigurationError("train/axle_spacing_m: required for multi-axle trains")
    dts = data["dt_grid_s"]
    if any(b >= a for a, b in zip(dts, dts[1:])):
        raise ConfigurationError("dt_grid_s: must be strictly decreasing")
    return StudyConfig(data, used)


def load_config(path) -> StudyConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: malformed YAML: {exc}") from None
    return parse_config(raw)
