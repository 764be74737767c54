"""Line-oriented configuration files for the command-line harness.

Files use bracketed section headers and key = value pairs::

    [problem]
    n = 480
    penalty = entropy

    [sweep]
    delta_max = 1e-1
    delta_min = 1e-4
    delta_count = 12

Unknown sections or keys are errors. Every key has a default; the full
schema with defaults is documented in docs/config.md.
"""

from __future__ import annotations

import configparser
from dataclasses import fields

from .errors import ConfigError
from .harness import (
    ExperimentConfig,
    NoiseModel,
    OutputConfig,
    ProblemConfig,
    SweepConfig,
    geometric_grid,
)
from .solvers import SolverConfig

__all__ = ["load_config", "default_config", "SCHEMA"]


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated floats, got {text!r}") from exc


def _parse_optional_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


# section -> key -> parser; defaults live on the dataclasses themselves
SCHEMA = {
    "problem": {
        "n": int,
        "operator": str,
        "penalty": str,
        "truth": str,
        "bspline_degree": int,
        "prior_value": float,
        "box_lo": float,
        "box_hi": float,
    },
    "solver": {
        "gamma": _parse_optional_float,
        "relax": float,
        "max_iter": int,
        "tol": float,
        "method": str,
    },
    "sweep": {
        "deltas": _parse_float_list,
        "delta_max": float,
        "delta_min": float,
        "delta_count": int,
        "alphas": _parse_float_list,
        "alpha_c": float,
        "alpha_sigma": float,
        "bregman_steps": int,
        "noise": str,
        "k_max": int,
        "k_fixed": int,
        "metric": str,
        "predicted_rate": _parse_optional_float,
        "calibrate_cs": _parse_float_list,
    },
    "output": {
        "directory": str,
        "csv_name": str,
        "svg_name": str,
        "write_svg": _parse_bool,
    },
}


def default_config() -> ExperimentConfig:
    return ExperimentConfig()


def _section_values(parser: configparser.ConfigParser, section: str) -> dict:
    if not parser.has_section(section):
        return {}
    values = {}
    for key, raw in parser.items(section):
        if key not in SCHEMA[section]:
            raise ConfigError(f"unknown key {key!r} in section [{section}]")
        try:
            values[key] = SCHEMA[section][key](raw)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from exc
    return values


def _build_sweep(values: dict) -> SweepConfig:
    values = dict(values)
    geo = {k: values.pop(k, None) for k in ("delta_max", "delta_min", "delta_count")}
    if "deltas" not in values and any(v is not None for v in geo.values()):
        if any(v is None for v in geo.values()):
            raise ConfigError("delta_max, delta_min and delta_count must be given together")
        values["deltas"] = geometric_grid(geo["delta_max"], geo["delta_min"], geo["delta_count"])
    noise_kwargs = {}
    if "noise" in values:
        noise_kwargs["kind"] = values.pop("noise")
    for key in ("k_max", "k_fixed"):
        if key in values:
            noise_kwargs[key] = values.pop(key)
    if noise_kwargs:
        values["noise"] = NoiseModel(**{**_as_kwargs(NoiseModel()), **noise_kwargs})
    return SweepConfig(**values)


def _as_kwargs(obj) -> dict:
    return {f.name: getattr(obj, f.name) for f in fields(obj)}


def load_config(path: str) -> ExperimentConfig:
    """Parse a config file, falling back to defaults for missing keys."""
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
    try:
        problem = ProblemConfig(**_section_values(parser, "problem"))
        solver = SolverConfig(**_section_values(parser, "solver"))
        sweep = _build_sweep(_section_values(parser, "sweep"))
        output = OutputConfig(**_section_values(parser, "output"))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return ExperimentConfig(problem=problem, solver=solver, sweep=sweep, output=output)
