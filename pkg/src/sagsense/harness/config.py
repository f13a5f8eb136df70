"""Experiment configuration files.

Configs are YAML (so plain JSON works too). Lengths are in kilometers and
powers in watts; everything is converted to SI on load. Unknown keys are
rejected, and every validation failure names the offending key path.

Example::

    scenario:
      satellite: [-10, 20, 300]     # km
      bs: [0, 0, 0]
      center: [20, 20, 10]
      radius: 10
    sweep: {kind: altitude, values: [300, 500, 800, 1100]}
    strategies: [joint, receive_only, transceiving]
    trials: 100
"""

import math
import os
from dataclasses import dataclass, field, replace
from importlib import resources

import numpy as np
import yaml

from ..channel import PropagationParams
from ..errors import ConfigError, SagsenseError
from ..optimizer import OptimizerConfig, Strategy
from ..sensing import NoiseModel

KM = 1e3

SWEEP_KINDS = ("none", "altitude", "antennas", "power")


@dataclass(frozen=True)
class ScenarioTemplate:
    """Fixed nodes plus the disc the aircraft are drawn from (all meters)."""

    satellite: tuple
    bs: tuple
    center: tuple
    radius: float = 10 * KM
    num_aircraft: int = 4
    target_index: int = 0
    tx_antennas: int = 8
    rx_antennas: int = 8
    spacing_ratio: float = 0.5


@dataclass(frozen=True)
class Sweep:
    kind: str = "none"
    values: tuple = ()

    def points(self):
        return self.values if self.kind != "none" else (math.nan,)


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: ScenarioTemplate
    prop: PropagationParams = field(default_factory=PropagationParams)
    noise: NoiseModel = field(default_factory=NoiseModel)
    opt: OptimizerConfig = field(default_factory=OptimizerConfig)
    sweep: Sweep = field(default_factory=Sweep)
    strategies: tuple = tuple(Strategy)
    trials: int = 100
    base_seed: int = 0

    def with_overrides(self, seed=None, strategies=None):
        spec = self
        if seed is not None:
            spec = replace(spec, base_seed=int(seed))
        if strategies is not None:
            spec = replace(spec, strategies=tuple(_strategy(s, "strategies") for s in strategies))
        return spec


# key -> (default, converter); None default means required.
_SCENARIO_KEYS = {
    "satellite": None,
    "bs": None,
    "center": None,
    "radius": 10.0,
    "num_aircraft": 4,
    "target_index": 0,
    "tx_antennas": 8,
    "rx_antennas": 8,
    "spacing_ratio": 0.5,
}
_PROP_KEYS = {
    "beta0_s2a": 1.0,
    "alpha_s2a": 2.0,
    "beta0_a2g": 1.0,
    "alpha_a2g": 2.2,
    "rician_k": 10.0,
    "reference_distance": 1.0,  # meters
}
_NOISE_KEYS = {"sigma2": 1e-12}
_OPT_FIELDS = {f for f in OptimizerConfig.__dataclass_fields__}
_TOP_KEYS = {"scenario", "propagation", "noise", "optimizer", "sweep", "strategies", "trials", "base_seed"}


def _number(value, key, positive=False, nonneg=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        # YAML 1.1 reads "1e-12" as a string.
        if isinstance(value, str):
            try:
                value = float(value)
            except ValueError:
                raise ConfigError(key, f"expected a number, got {value!r}") from None
        else:
            raise ConfigError(key, f"expected a number, got {value!r}")
    if integer:
        if float(value) != int(value):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        value = int(value)
    elif math.isnan(value):
        raise ConfigError(key, "must not be NaN")
    if positive and not value > 0:
        raise ConfigError(key, f"must be positive, got {value!r}")
    if nonneg and not value >= 0:
        raise ConfigError(key, f"must be >= 0, got {value!r}")
    return value


def _triple_km(value, key):
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(key, f"expected [x, y, z] in km, got {value!r}")
    xyz = tuple(_number(v, f"{key}[{i}]") * KM for i, v in enumerate(value))
    if not all(math.isfinite(v) for v in xyz):
        raise ConfigError(key, "coordinates must be finite")
    return xyz


def _section(raw, name, allowed):
    body = raw.get(name, {})
    if body is None:
        body = {}
    if not isinstance(body, dict):
        raise ConfigError(name, "expected a mapping")
    unknown = sorted(set(body) - set(allowed))
    if unknown:
        raise ConfigError(f"{name}.{unknown[0]}", "unknown key")
    return body


def _strategy(value, key):
    try:
        return Strategy(str(value).lower())
    except ValueError:
        choices = ", ".join(s.value for s in Strategy)
        raise ConfigError(key, f"unknown strategy {value!r} (choose from {choices})") from None


def _scenario(raw):
    body = _section(raw, "scenario", _SCENARIO_KEYS)
    for key, default in _SCENARIO_KEYS.items():
        if default is None and key not in body:
            raise ConfigError(f"scenario.{key}", "required")
    vals = {k: body.get(k, d) for k, d in _SCENARIO_KEYS.items()}
    tmpl = ScenarioTemplate(
        satellite=_triple_km(vals["satellite"], "scenario.satellite"),
        bs=_triple_km(vals["bs"], "scenario.bs"),
        center=_triple_km(vals["center"], "scenario.center"),
        radius=_number(vals["radius"], "scenario.radius", nonneg=True) * KM,
        num_aircraft=_number(vals["num_aircraft"], "scenario.num_aircraft", positive=True, integer=True),
        target_index=_number(vals["target_index"], "scenario.target_index", nonneg=True, integer=True),
        tx_antennas=_number(vals["tx_antennas"], "scenario.tx_antennas", positive=True, integer=True),
        rx_antennas=_number(vals["rx_antennas"], "scenario.rx_antennas", positive=True, integer=True),
        spacing_ratio=_number(vals["spacing_ratio"], "scenario.spacing_ratio", positive=True),
    )
    if tmpl.target_index >= tmpl.num_aircraft:
        raise ConfigError("scenario.target_index", "must be < num_aircraft")
    if tmpl.bs[2] < 0 or tmpl.center[2] < 0:
        raise ConfigError("scenario.center" if tmpl.center[2] < 0 else "scenario.bs", "z must be >= 0")
    return tmpl


def _propagation(raw):
    body = _section(raw, "propagation", _PROP_KEYS)
    vals = {}
    for key, default in _PROP_KEYS.items():
        value = body.get(key, default)
        if key == "rician_k" and isinstance(value, str) and value.lower() in ("inf", "los", "los_only"):
            vals[key] = math.inf
            continue
        vals[key] = _number(value, f"propagation.{key}", nonneg=(key == "rician_k"), positive=(key != "rician_k"))
    return PropagationParams(**vals)


def _optimizer(raw):
    body = _section(raw, "optimizer", _OPT_FIELDS)
    vals = {}
    for key, value in body.items():
        if key == "lambda_max" and value is None:
            vals[key] = None
            continue
        integer = key.startswith("max_")
        vals[key] = _number(value, f"optimizer.{key}", integer=integer, nonneg=True)
    try:
        return OptimizerConfig(**vals)
    except SagsenseError as exc:
        raise ConfigError("optimizer", str(exc)) from None


def _sweep(raw):
    body = _section(raw, "sweep", {"kind", "values"})
    kind = str(body.get("kind", "none")).lower()
    if kind not in SWEEP_KINDS:
        raise ConfigError("sweep.kind", f"expected one of {SWEEP_KINDS}, got {kind!r}")
    if kind == "none":
        if body.get("values"):
            raise ConfigError("sweep.values", "not allowed when kind is none")
        return Sweep()
    values = body.get("values")
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values", "expected a non-empty list")
    integer = kind == "antennas"
    parsed = tuple(_number(v, f"sweep.values[{i}]", positive=True, integer=integer) for i, v in enumerate(values))
    if any(b <= a for a, b in zip(parsed, parsed[1:])):
        raise ConfigError("sweep.values", "must be strictly increasing")
    return Sweep(kind=kind, values=parsed)


def spec_from_dict(raw):
    """Validate a config mapping and fill in defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a mapping")
    unknown = sorted(set(raw) - _TOP_KEYS)
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    if "scenario" not in raw:
        raise ConfigError("scenario", "required")

    strategies = raw.get("strategies", [s.value for s in Strategy])
    if not isinstance(strategies, list) or not strategies:
        raise ConfigError("strategies", "expected a non-empty list")
    strategies = tuple(_strategy(s, f"strategies[{i}]") for i, s in enumerate(strategies))
    if len(set(strategies)) != len(strategies):
        raise ConfigError("strategies", "duplicate entries")

    noise_body = _section(raw, "noise", _NOISE_KEYS)
    noise = NoiseModel(sigma2=_number(noise_body.get("sigma2", _NOISE_KEYS["sigma2"]), "noise.sigma2", positive=True))

    return ExperimentSpec(
        scenario=_scenario(raw),
        prop=_propagation(raw),
        noise=noise,
        opt=_optimizer(raw),
        sweep=_sweep(raw),
        strategies=strategies,
        trials=_number(raw.get("trials", 100), "trials", positive=True, integer=True),
        base_seed=_number(raw.get("base_seed", 0), "base_seed", nonneg=True, integer=True),
    )


def bundled_config(name):
    """Path of a config shipped with the package, e.g. ``paper_default.cfg``."""
    return resources.files("sagsense") / "configs" / name


def resolve_config_path(path):
    """``path`` itself if it exists, else a bundled config of that name."""
    if os.path.exists(path):
        return path
    candidate = bundled_config(os.path.basename(path))
    if candidate.is_file():
        return str(candidate)
    return path


def parse_config(path):
    """Load and validate an experiment config.

    Raises
    ------
    OSError
        The file cannot be read.
    ConfigError
        Malformed content or a schema violation; ``exc.key`` names the path.
    """
    path = resolve_config_path(str(path))
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<root>", f"cannot parse {path}: {exc}") from None
    return spec_from_dict(raw if raw is not None else {})


def as_array(xyz):
    return np.asarray(xyz, dtype=float)
