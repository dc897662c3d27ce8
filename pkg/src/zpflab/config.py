"""Scenario configuration: JSON schema, loading and resolution.

A scenario file names one experiment, a level system, the response matrices
it needs and the experiment parameters. Validation runs before anything is
computed; every failure surfaces as ``ConfigError``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import jsonschema
import numpy as np

from .errors import ConfigError
from .response import LevelSystem, ResponseMatrix, harmonic_oscillator, momentum_matrix, random_hermitian

SCHEMA_VERSION = 1
EXPERIMENTS = ("trk", "commutator", "bracket2", "covariance", "entangle", "spin", "pauli",
               "full-suite")

_HALF = {"anyOf": [{"type": "integer"}, {"type": "number"},
                   {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*2)?\s*$"}]}
_SEED = {"anyOf": [{"type": "integer", "minimum": 0},
                   {"type": "string", "pattern": r"^(0[xX][0-9a-fA-F]+|\d+)$"}]}
_COMPLEX = {"anyOf": [{"type": "number"},
                      {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}

CONFIG_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "zpflab scenario",
    "type": "object",
    "required": ["schema_version", "experiment"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "experiment": {"enum": list(EXPERIMENTS)},
        "description": {"type": "string"},
        "system": {"anyOf": [
            {"type": "string", "pattern": r"^\s*oscillator\s*\(.*\)\s*$"},
            {"type": "object", "required": ["energies"], "additionalProperties": False,
             "properties": {"energies": {"type": "array", "items": {"type": "number"}, "minItems": 2},
                            "mass": {"type": "number", "exclusiveMinimum": 0},
                            "hbar": {"type": "number", "exclusiveMinimum": 0}}},
        ]},
        "matrices": {"type": "object", "additionalProperties": {"anyOf": [
            {"enum": ["x", "p"]},
            {"type": "array", "items": {"type": "array", "items": _COMPLEX}},
            {"type": "object", "required": ["path"], "additionalProperties": False,
             "properties": {"path": {"type": "string"}}},
            {"type": "object", "required": ["dim", "entries"], "additionalProperties": False,
             "properties": {"dim": {"type": "integer", "minimum": 2},
                            "entries": {"type": "array", "items": {
                                "type": "array", "items": {"type": "number"},
                                "minItems": 2, "maxItems": 2}}}},
            {"type": "object", "required": ["random_hermitian"], "additionalProperties": False,
             "properties": {"random_hermitian": {
                 "type": "object", "required": ["dim", "seed"], "additionalProperties": False,
                 "properties": {"dim": {"type": "integer", "minimum": 2},
                                "seed": {"type": "integer", "minimum": 0}}}}},
        ]}},
        "params": {"type": "object", "additionalProperties": False, "properties": {
            "zeta": _HALF, "zeta1": _HALF, "zeta2": _HALF,
            "gamma": {"anyOf": [_HALF, {"type": "array", "items": _HALF, "minItems": 1}]},
            "upsilon": _HALF,
            "k": {"type": "integer", "minimum": 1},
            "n": {"type": "integer", "minimum": 0},
            "m": {"type": "integer", "minimum": 0},
            "phi": {"anyOf": [{"type": "number"},
                              {"type": "array", "items": {"type": "number"}, "minItems": 1}]},
            "samples": {"type": "integer", "minimum": 1000},
            "batches": {"type": "integer", "minimum": 2},
            "workers": {"type": "integer", "minimum": 1},
            "seed": _SEED,
            "step": {"type": "number", "exclusiveMinimum": 0},
        }},
        "tolerances": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
    },
}

DEFAULT_TOLERANCES = {
    "trk": 1e-12,
    "commutator": 1e-12,
    "heisenberg": 1e-12,
    "bracket_rel": 1e-6,
    "exact": 1e-12,
    "mc_sigma": 4.0,
}

_OSC = re.compile(r"^\s*oscillator\s*\(([^)]*)\)\s*$")


@dataclass(frozen=True)
class ScenarioConfig:
    experiment: str
    system: LevelSystem | None = None
    matrices: Mapping[str, ResponseMatrix] = field(default_factory=dict)
    params: Mapping[str, Any] = field(default_factory=dict)
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    schema_version: int = SCHEMA_VERSION
    raw: Mapping[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def matrix(self, name: str) -> ResponseMatrix:
        try:
            return self.matrices[name]
        except KeyError:
            raise ConfigError(f"experiment {self.experiment!r} needs matrix {name!r}") from None

    def require_system(self) -> LevelSystem:
        if self.system is None:
            raise ConfigError(f"experiment {self.experiment!r} needs a system")
        return self.system

    def with_params(self, **updates) -> ScenarioConfig:
        merged = dict(self.params)
        merged.update({k: v for k, v in updates.items() if v is not None})
        return ScenarioConfig(self.experiment, self.system, self.matrices, merged, self.tolerances,
                              self.schema_version, self.raw)


def parse_oscillator(spec: str) -> tuple[int, float, float, float]:
    """``"oscillator(d, m, omega0, hbar)"``; trailing arguments default to 1."""
    match = _OSC.match(spec)
    if not match:
        raise ConfigError(f"cannot parse system {spec!r}")
    parts = [p.strip() for p in match.group(1).split(",") if p.strip()]
    if not 1 <= len(parts) <= 4:
        raise ConfigError("oscillator(d, m, omega0, hbar) takes 1 to 4 arguments")
    try:
        d = int(parts[0])
        rest = [float(p) for p in parts[1:]] + [1.0] * (4 - len(parts))
    except ValueError as exc:
        raise ConfigError(f"bad oscillator argument in {spec!r}: {exc}") from None
    if d < 2 or min(rest) <= 0:
        raise ConfigError("oscillator needs d >= 2 and positive m, omega0, hbar")
    return d, rest[0], rest[1], rest[2]


def _matrix(name: str, spec: Any, ladder: tuple[LevelSystem, ResponseMatrix] | None,
            base: Path) -> ResponseMatrix:
    if isinstance(spec, str):
        if ladder is None:
            raise ConfigError(f"matrix {name!r} = {spec!r} needs an oscillator system")
        system, x = ladder
        return x if spec == "x" else momentum_matrix(x, system)
    if isinstance(spec, list):
        rows = [[complex(*v) if isinstance(v, list) else complex(v) for v in row] for row in spec]
        return ResponseMatrix(np.array(rows))
    if "path" in spec:
        path = Path(spec["path"])
        path = path if path.is_absolute() else base / path
        if not path.is_file():
            raise ConfigError(f"matrix file not found: {path}")
        return ResponseMatrix.load(path)
    if "random_hermitian" in spec:
        r = spec["random_hermitian"]
        return random_hermitian(r["dim"], np.random.default_rng(r["seed"]))
    return ResponseMatrix.from_json(spec)


def config_from_dict(obj: Mapping[str, Any], base: Path | str = ".") -> ScenarioConfig:
    """Validate ``obj`` against the schema and resolve systems and matrices."""
    try:
        jsonschema.validate(obj, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    base = Path(base)
    ladder = None
    system = None
    spec = obj.get("system")
    try:
        if isinstance(spec, str):
            ladder = harmonic_oscillator(*parse_oscillator(spec))
            system = ladder[0]
        elif spec is not None:
            system = LevelSystem(tuple(spec["energies"]), spec.get("mass", 1.0), spec.get("hbar", 1.0))
        matrices = {name: _matrix(name, m, ladder, base) for name, m in obj.get("matrices", {}).items()}
    except ConfigError:
        raise
    except (ValueError, KeyError, TypeError, OSError) as exc:
        raise ConfigError(str(exc)) from None
    if system is not None:
        for name, mat in matrices.items():
            if mat.dim != system.dim:
                raise ConfigError(f"matrix {name!r} has dim {mat.dim}, system has {system.dim}")
    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(obj.get("tolerances", {}))
    return ScenarioConfig(obj["experiment"], system, matrices, dict(obj.get("params", {})),
                          tolerances, obj["schema_version"], dict(obj))


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return config_from_dict(obj, path.parent)
