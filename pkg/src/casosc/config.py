"""Run configuration: a single JSON document per invocation.

Top-level blocks are "model", "sweep", "output", and "tolerances"; all
are optional and unknown keys are rejected with their full key path.
The model and sweep schemas depend on the subcommand:

    tm3 / te3   model: a1, a2, a3, c          sweep: T_min, T_max, points, spacing
    bath        model: kind, a1, a2, N,       sweep: T_min, T_max, points, spacing
                       k_max, coupling
    dipole      model: g1, g2, a1, a2         sweep: r_min, r_max, points,
                                                     spacing, temperature

output: format (csv|json), path (null = standard output), plot (null or
an image path rendered alongside the table).  tolerances: rel_tol,
n_max_cap of the Matsubara truncation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

SPACINGS = ("linear", "log")
FORMATS = ("csv", "json")
BATH_KINDS = ("tm", "te")

_THERMO_SWEEP = {"T_min": 0.1, "T_max": 100.0, "points": 31, "spacing": "log"}
_DEFAULTS = {
    "tm3": ({"a1": 1.0, "a2": 1.0, "a3": 1.0, "c": 0.3}, _THERMO_SWEEP),
    "te3": ({"a1": 1.0, "a2": 1.0, "a3": 1.0, "c": 0.3}, _THERMO_SWEEP),
    "bath": ({"kind": "te", "a1": 1.0, "a2": 1.0, "N": 4,
              "k_max": 2.0, "coupling": 0.25}, _THERMO_SWEEP),
    "dipole": ({"g1": 1.0, "g2": 1.0, "a1": 1.0, "a2": 1.0},
               {"r_min": 10.0, "r_max": 100.0, "points": 25,
                "spacing": "log", "temperature": 1e-4}),
}
_OUTPUT_DEFAULTS = {"format": "csv", "path": None, "plot": None}
_TOLERANCE_DEFAULTS = {"rel_tol": 1e-10, "n_max_cap": 10_000_000}


class ConfigError(ValueError):
    """Configuration rejected; .key holds the offending key path."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: dict
    sweep: dict
    output: dict
    tolerances: dict


def _merge(block_name: str, given: dict, defaults: dict) -> dict:
    if not isinstance(given, dict):
        raise ConfigError(block_name, f"must be an object, got {type(given).__name__}")
    for key in given:
        if key not in defaults:
            raise ConfigError(f"{block_name}.{key}", "unknown key")
    merged = dict(defaults)
    merged.update(given)
    return merged


def _number(block: dict, path: str, key: str, *, minimum=None, exclusive=True,
            maximum=None) -> float:
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}", f"must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{path}.{key}", f"must be finite, got {value}")
    if minimum is not None:
        if exclusive and value <= minimum:
            raise ConfigError(f"{path}.{key}", f"must be > {minimum}, got {value}")
        if not exclusive and value < minimum:
            raise ConfigError(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ConfigError(f"{path}.{key}", f"must be <= {maximum}, got {value}")
    block[key] = value
    return value


def _integer(block: dict, path: str, key: str, *, minimum: int) -> int:
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}", f"must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"{path}.{key}", f"must be >= {minimum}, got {value}")
    return value


def _choice(block: dict, path: str, key: str, choices) -> str:
    value = block[key]
    if value not in choices:
        raise ConfigError(f"{path}.{key}", f"must be one of {'|'.join(choices)}, got {value!r}")
    return value


def parse_config(text: str, command: str) -> RunConfig:
    """Validate a JSON config document for the given subcommand."""
    if command not in _DEFAULTS:
        raise ConfigError("", f"no config schema for command {command!r}")
    try:
        raw = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("", f"top level must be an object, got {type(raw).__name__}")
    for key in raw:
        if key not in ("model", "sweep", "output", "tolerances"):
            raise ConfigError(key, "unknown key")

    model_defaults, sweep_defaults = _DEFAULTS[command]
    model = _merge("model", raw.get("model", {}), model_defaults)
    sweep = _merge("sweep", raw.get("sweep", {}), sweep_defaults)
    output = _merge("output", raw.get("output", {}), _OUTPUT_DEFAULTS)
    tolerances = _merge("tolerances", raw.get("tolerances", {}), _TOLERANCE_DEFAULTS)

    if command in ("tm3", "te3"):
        for key in ("a1", "a2", "a3"):
            _number(model, "model", key, minimum=0.0)
        _number(model, "model", "c", minimum=0.0, exclusive=False)
    elif command == "bath":
        _choice(model, "model", "kind", BATH_KINDS)
        for key in ("a1", "a2", "k_max"):
            _number(model, "model", key, minimum=0.0)
        _integer(model, "model", "N", minimum=1)
        _number(model, "model", "coupling", minimum=0.0, exclusive=False)
    else:
        for key in ("g1", "g2", "a1", "a2"):
            _number(model, "model", key, minimum=0.0)

    _integer(sweep, "sweep", "points", minimum=2)
    _choice(sweep, "sweep", "spacing", SPACINGS)
    if command == "dipole":
        lo = _number(sweep, "sweep", "r_min", minimum=0.0)
        _number(sweep, "sweep", "r_max", minimum=lo)
        _number(sweep, "sweep", "temperature", minimum=0.0)
    else:
        lo = _number(sweep, "sweep", "T_min", minimum=0.0)
        _number(sweep, "sweep", "T_max", minimum=lo)

    _choice(output, "output", "format", FORMATS)
    for key in ("path", "plot"):
        if output[key] is not None and not isinstance(output[key], str):
            raise ConfigError(f"output.{key}", "must be a string or null")

    _number(tolerances, "tolerances", "rel_tol", minimum=0.0, maximum=1e-3)
    _integer(tolerances, "tolerances", "n_max_cap", minimum=1)

    return RunConfig(command, model, sweep, output, tolerances)


def emit_config(config: RunConfig) -> str:
    """Canonical JSON for a RunConfig; parse_config round-trips it."""
    blocks = {"model": config.model, "sweep": config.sweep,
              "output": config.output, "tolerances": config.tolerances}
    return json.dumps(blocks, indent=2, sort_keys=True)


def sweep_grid(config: RunConfig) -> list[float]:
    """The ascending sweep abscissa (temperatures, or separations for dipole)."""
    sweep = config.sweep
    lo, hi = ((sweep["r_min"], sweep["r_max"]) if config.command == "dipole"
              else (sweep["T_min"], sweep["T_max"]))
    if sweep["spacing"] == "log":
        grid = np.geomspace(lo, hi, sweep["points"])
    else:
        grid = np.linspace(lo, hi, sweep["points"])
    return [float(x) for x in grid]
