"""YAML scenario configuration.

A scenario file mirrors :class:`uavsim.engine.ScenarioConfig`: scalar run
settings at the top level and one mapping per parameter group (``uav``,
``attitude``, ``airspeed``, ``adp``, ``ftsm``, ``disturbances``,
``reference``, ``initial``).  Every unknown key is rejected with its dotted
path so a typo never silently falls back to a default.  Angles cross the
boundary in the units people write them in (degrees where a section says so)
and are converted to radians here, never inside the dynamics or controllers.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import replace
from typing import Any

import numpy as np
import yaml

from .adp import N_NEURONS, AdpParams
from .baselines import FtsmGstParams
from .disturbances import (
    DisturbanceProfile,
    Piecewise,
    Polynomial,
    Signal,
    Sine,
    Zero,
    default_profile,
    zero_profile,
)
from .dynamics import UavParams
from .engine import InitialConditions, ScenarioConfig
from .errors import ConfigError
from .references import ReferenceCommand, default_reference, signal_from_dict
from .smc_airspeed import AirspeedSmcParams
from .smc_attitude import AttitudeSmcParams

__all__ = [
    "apply_overrides",
    "config_from_dict",
    "load_config",
    "load_scenario",
]

_RATE_UNITS = ("rad", "deg")


def _expect_mapping(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
    return value


def _build_dataclass(cls, data: Any, path: str):
    """Generic section builder: field names are the YAML keys."""
    data = _expect_mapping(data, path)
    valid = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - valid)
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}: unknown key (valid: {sorted(valid)})")
    return cls(**data)


def _build_adp(data: Any, path: str) -> AdpParams:
    data = dict(_expect_mapping(data, path))
    kwargs: dict[str, Any] = {}
    if "q_e" in data:
        raw = data.pop("q_e")
        if isinstance(raw, (int, float)):
            kwargs["q_e"] = float(raw) * np.eye(7)
        else:
            kwargs["q_e"] = np.diag(np.asarray(raw, dtype=float))
    if "r_u" in data:
        raw = data.pop("r_u")
        if isinstance(raw, (int, float)):
            kwargs["r_u"] = np.full(4, float(raw))
        else:
            kwargs["r_u"] = np.asarray(raw, dtype=float)
    if "gamma_a" in data:
        kwargs["gamma_a"] = float(data.pop("gamma_a")) * np.eye(N_NEURONS)
    if "gamma_b" in data:
        kwargs["gamma_b"] = np.full(N_NEURONS, float(data.pop("gamma_b")))
    base = _build_dataclass(AdpParams, data, path)
    return replace(base, **kwargs) if kwargs else base


_SIGNAL_KEYS = {
    "zero": (),
    "sine": ("amplitude", "omega", "phase"),
    "polynomial": ("coeffs",),
    "piecewise": ("breakpoints", "parts"),
}


def _build_signal(data: Any, path: str, scale: float = 1.0) -> Signal:
    """Disturbance channel signal; ``scale`` converts amplitudes (deg->rad)."""
    data = dict(_expect_mapping(data, path))
    kind = data.pop("type", None)
    if kind not in _SIGNAL_KEYS:
        raise ConfigError(
            f"{path}.type: expected one of {sorted(_SIGNAL_KEYS)}, got {kind!r}"
        )
    unknown = sorted(set(data) - set(_SIGNAL_KEYS[kind]))
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}: unknown key for type {kind!r}")
    if kind == "zero":
        return Zero()
    if kind == "sine":
        return Sine(
            amplitude=scale * float(data.get("amplitude", 1.0)),
            omega=float(data.get("omega", 1.0)),
            phase=float(data.get("phase", 0.0)),
        )
    if kind == "polynomial":
        coeffs = tuple(scale * float(c) for c in data.get("coeffs", ()))
        return Polynomial(coeffs=coeffs)
    breakpoints = tuple(float(b) for b in data.get("breakpoints", ()))
    parts_raw = data.get("parts", ())
    parts = tuple(
        _build_signal(part, f"{path}.parts[{i}]", scale)
        for i, part in enumerate(parts_raw)
    )
    return Piecewise(breakpoints=breakpoints, parts=parts)


def _signal_triple(data: Any, path: str, scale: float = 1.0) -> tuple:
    if not isinstance(data, (list, tuple)) or len(data) != 3:
        raise ConfigError(f"{path}: expected a list of 3 signal mappings")
    return tuple(
        _build_signal(item, f"{path}[{i}]", scale) for i, item in enumerate(data)
    )


def _build_disturbances(data: Any, path: str) -> DisturbanceProfile:
    data = dict(_expect_mapping(data, path))
    mode = data.pop("mode", "standard")
    rate_unit = data.pop("rate_unit", "rad")
    if rate_unit not in _RATE_UNITS:
        raise ConfigError(f"{path}.rate_unit: expected 'rad' or 'deg', got {rate_unit!r}")
    if mode == "standard":
        if data:
            key = sorted(data)[0]
            raise ConfigError(f"{path}.{key}: unknown key for mode 'standard'")
        return default_profile(rate_in_degrees=(rate_unit == "deg"))
    if mode == "none":
        if data:
            key = sorted(data)[0]
            raise ConfigError(f"{path}.{key}: unknown key for mode 'none'")
        return zero_profile()
    if mode != "custom":
        raise ConfigError(
            f"{path}.mode: expected 'standard', 'none' or 'custom', got {mode!r}"
        )
    rate_scale = math.radians(1.0) if rate_unit == "deg" else 1.0
    d_m = _signal_triple(data.pop("d_m", [{"type": "zero"}] * 3), f"{path}.d_m")
    d_u = _signal_triple(
        data.pop("d_u", [{"type": "zero"}] * 3), f"{path}.d_u", rate_scale
    )
    d_v = _build_signal(data.pop("d_v", {"type": "zero"}), f"{path}.d_v")
    if data:
        key = sorted(data)[0]
        raise ConfigError(f"{path}.{key}: unknown key for mode 'custom'")
    return DisturbanceProfile(d_m=d_m, d_u=d_u, d_v=d_v)


_ANGLE_FIELDS = ("value_const", "start", "end", "offset", "amplitude")


def _build_reference(data: Any, path: str) -> ReferenceCommand:
    data = dict(_expect_mapping(data, path))
    angle_unit = data.pop("angle_unit", "rad")
    if angle_unit not in _RATE_UNITS:
        raise ConfigError(f"{path}.angle_unit: expected 'rad' or 'deg', got {angle_unit!r}")
    base = default_reference()
    channels: dict[str, Any] = {}
    for channel in ("phi", "theta", "psi", "airspeed"):
        if channel not in data:
            continue
        spec = _expect_mapping(data.pop(channel), f"{path}.{channel}")
        try:
            signal = signal_from_dict(spec)
        except ValueError as exc:
            raise ConfigError(f"{path}.{channel}: {exc}") from exc
        if angle_unit == "deg" and channel != "airspeed":
            for name in _ANGLE_FIELDS:
                if hasattr(signal, name):
                    setattr(signal, name, math.radians(getattr(signal, name)))
        channels[channel] = signal
    if data:
        key = sorted(data)[0]
        raise ConfigError(f"{path}.{key}: unknown key")
    return replace(base, **channels) if channels else base


def _build_initial(data: Any, path: str) -> InitialConditions:
    data = dict(_expect_mapping(data, path))
    kwargs: dict[str, Any] = {}
    for key, size in (("theta_deg", 3), ("omega_deg", 3), ("p0", 3)):
        if key in data:
            raw = data.pop(key)
            if not isinstance(raw, (list, tuple)) or len(raw) != size:
                raise ConfigError(f"{path}.{key}: expected a list of {size} numbers")
            kwargs[key] = tuple(float(v) for v in raw)
    if "v0" in data:
        kwargs["v0"] = float(data.pop("v0"))
    if data:
        key = sorted(data)[0]
        raise ConfigError(f"{path}.{key}: unknown key")
    return InitialConditions(**kwargs)


_SECTIONS = {
    "uav": lambda d, p: _build_dataclass(UavParams, d, p),
    "attitude": lambda d, p: _build_dataclass(AttitudeSmcParams, d, p),
    "airspeed": lambda d, p: _build_dataclass(AirspeedSmcParams, d, p),
    "adp": _build_adp,
    "ftsm": lambda d, p: _build_dataclass(FtsmGstParams, d, p),
    "disturbances": _build_disturbances,
    "reference": _build_reference,
    "initial": _build_initial,
}

_TOP_KEYS = {
    "name",
    "duration",
    "dt",
    "integrator",
    "controller",
    "aero_force",
    "seed",
    "decimate",
    "out_dir",
    "thrust_min",
    "thrust_max",
} | set(_SECTIONS)


def config_from_dict(data: dict, *, source: str = "config") -> ScenarioConfig:
    """Build and validate a :class:`ScenarioConfig` from a parsed mapping."""
    data = dict(_expect_mapping(data, source))
    unknown = sorted(set(data) - _TOP_KEYS)
    if unknown:
        raise ConfigError(f"{source}: unknown key {unknown[0]!r} (valid: {sorted(_TOP_KEYS)})")
    kwargs: dict[str, Any] = {}
    for key, builder in _SECTIONS.items():
        if key in data:
            kwargs[key] = builder(data.pop(key), key)
    kwargs.update(data)
    try:
        cfg = ScenarioConfig(**kwargs)
        cfg.validate()
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    return cfg


def load_config(path: str) -> dict:
    """Parse a YAML scenario file into a plain mapping."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = yaml.safe_load(handle)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def apply_overrides(data: dict, assignments) -> dict:
    """Apply ``section.key=value`` override strings to a parsed mapping."""
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        dotted, _, raw = item.partition("=")
        dotted = dotted.strip()
        if not dotted:
            raise ConfigError(f"override {item!r} has an empty key")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigError(f"override {item!r}: invalid value ({exc})") from exc
        if isinstance(value, str):
            # YAML 1.1 reads bare scientific notation ("2e-3") as a string
            try:
                value = float(value)
            except ValueError:
                pass
        node = data
        parts = dotted.split(".")
        for part in parts[:-1]:
            nxt = node.get(part)
            if not isinstance(nxt, dict):
                nxt = {}
                node[part] = nxt
            node = nxt
        node[parts[-1]] = value
    return data


def load_scenario(path: str, overrides=()) -> ScenarioConfig:
    """Load, override and validate a scenario file in one call."""
    data = load_config(path)
    if overrides:
        apply_overrides(data, overrides)
    return config_from_dict(data, source=path)
