"""Run configuration: schema, strict YAML parsing and canonical dumping.

A config document looks like::

    scenario: ftir
    params:
      gap: 32.8mm
      angle: 45deg
    sweep: gap:0mm:98.4mm:64      # or {param: gap, start: 0mm, stop: 98.4mm, steps: 64}
    pulse: {carrier: 9.15GHz, envelope: gaussian, envelope_duration: 2ns}
    outputs: [timing, gh]
    format: csv
    out: results

Quantities are SI numbers or strings with a unit suffix; bare angles are
degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Any, Optional

import numpy as np
import yaml

from ..conventions import SPEED_OF_LIGHT
from ..errors import ConfigError
from ..pulse import PulseSpec
from ..units import parse_quantity

SCENARIOS = ("ftir", "waveguide", "lattice", "acoustic", "quantum")
OUTPUTS = ("scatter", "timing", "hartman", "gh", "pulse", "virtuality")
FORMATS = ("csv", "json")
TOP_KEYS = ("scenario", "params", "sweep", "pulse", "outputs", "format", "out")
BASE_UNIT = {
    "length": "m",
    "frequency": "Hz",
    "time": "s",
    "angle": "rad",
    "speed": "m/s",
    "impedance": "rayl",
    "dimensionless": "",
}


@dataclass(frozen=True)
class Param:
    kind: str  # a units kind, "integer" or "choice"
    default: Any
    lo: Optional[float] = None
    hi: Optional[float] = None
    lo_open: bool = True
    hi_open: bool = False
    choices: tuple = ()

    def check(self, name, value):
        if self.kind == "choice":
            if value not in self.choices:
                raise ConfigError(
                    f"{name} must be one of {', '.join(self.choices)}, got {value!r}",
                    code="out_of_range", key=name,
                )
            return
        if not math.isfinite(value):
            raise ConfigError(f"{name} must be finite", code="out_of_range", key=name)
        below = self.lo is not None and (value <= self.lo if self.lo_open else value < self.lo)
        above = self.hi is not None and (value >= self.hi if self.hi_open else value > self.hi)
        if below or above:
            lo = "(" if self.lo_open else "["
            hi = ")" if self.hi_open else "]"
            raise ConfigError(
                f"{name}={value!r} outside {lo}{self.lo}, {self.hi}{hi}",
                code="out_of_range", key=name,
            )


SCHEMAS: dict[str, dict[str, Param]] = {
    "ftir": {
        "frequency": Param("frequency", 9.15e9, 0.0),
        "prism_index": Param("dimensionless", 1.6, 0.0),
        "gap_index": Param("dimensionless", 1.0, 0.0),
        "gap": Param("length", None, 0.0, lo_open=False),  # None: one wavelength
        "angle": Param("angle", math.pi / 4, 0.0, math.pi / 2, lo_open=False, hi_open=True),
        "polarization": Param("choice", "TM", choices=("TE", "TM")),
        "gh_mode": Param("choice", "single", choices=("single", "finite")),
    },
    "waveguide": {
        "frequency": Param("frequency", 9.15e9, 0.0),
        "wide_width": Param("length", 30e-3, 0.0),
        "narrow_width": Param("length", 10e-3, 0.0),
        "length": Param("length", 20e-3, 0.0),
    },
    "lattice": {
        "frequency": Param("frequency", 9.15e9, 0.0),
        "n_high": Param("dimensionless", 1.6, 0.0),
        "n_low": Param("dimensionless", 1.0, 0.0),
        "d_high": Param("length", None, 0.0),  # None: quarter wave at frequency
        "d_low": Param("length", None, 0.0),
        "periods": Param("integer", 8, 1, lo_open=False),
    },
    "acoustic": {
        "frequency": Param("frequency", 1e3, 0.0),
        "sound_speed": Param("speed", 343.0, 0.0),
        "impedance_high": Param("impedance", 830.0, 0.0),
        "impedance_low": Param("impedance", 415.0, 0.0),
        "d_high": Param("length", None, 0.0),
        "d_low": Param("length", None, 0.0),
        "periods": Param("integer", 8, 1, lo_open=False),
    },
    "quantum": {
        "energy": Param("dimensionless", 0.5, 0.0),
        "barrier_height": Param("dimensionless", 1.0, 0.0, lo_open=False),
        "length": Param("dimensionless", 6.0, 0.0),
    },
}

# the parameter playing the role of barrier length in timing/hartman tables
LENGTH_PARAM = {"ftir": "gap", "waveguide": "length", "lattice": "periods", "acoustic": "periods", "quantum": "length"}


def reference_wavelength(scenario: str, params: dict) -> Optional[float]:
    if scenario == "quantum":
        return None
    speed = params.get("sound_speed", SPEED_OF_LIGHT) if scenario == "acoustic" else SPEED_OF_LIGHT
    return speed / params["frequency"]


def _maybe_wavelength(scenario, params):
    if scenario == "quantum" or "frequency" not in params:
        return None
    if scenario == "acoustic" and "sound_speed" not in params:
        return None
    return reference_wavelength(scenario, params)


@dataclass(frozen=True)
class Sweep:
    param: str
    start: float
    stop: float
    steps: int

    def values(self, integer: bool = False) -> list:
        v = np.linspace(self.start, self.stop, self.steps)
        if integer:
            return [int(round(x)) for x in v]
        return [float(x) for x in v]


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    params: dict
    sweep: Optional[Sweep] = None
    pulse: Optional[PulseSpec] = None
    outputs: tuple = ("timing",)
    output_path: str = "evanesim_out"
    format: str = "csv"

    def points(self) -> list[dict]:
        """Parameter dicts for every sweep point, in sweep order."""
        if self.sweep is None:
            return [dict(self.params)]
        integer = SCHEMAS[self.scenario][self.sweep.param].kind == "integer"
        return [{**self.params, self.sweep.param: v} for v in self.sweep.values(integer)]


def _convert(scenario, name, raw, params):
    spec = SCHEMAS[scenario].get(name)
    if spec is None:
        raise ConfigError(f"unknown parameter {name!r} for scenario {scenario}", code="unknown_key", key=name)
    try:
        if spec.kind == "choice":
            value = str(raw)
            if name == "polarization":
                value = value.upper()
        elif spec.kind == "integer":
            value = float(raw) if not isinstance(raw, str) else float(raw.strip())
            if value != int(value):
                raise ValueError(f"{name} must be an integer")
            value = int(value)
        else:
            value = parse_quantity(raw, spec.kind, _maybe_wavelength(scenario, params))
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}", code="bad_value", key=name) from None
    spec.check(name, value)
    return value


def resolve_params(scenario: str, given: dict) -> dict:
    """Fully defaulted, unit-converted parameter dict."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}", code="out_of_range", key="scenario")
    if not isinstance(given, dict):
        raise ConfigError("params must be a mapping", code="bad_value", key="params")
    given = {str(k).replace("-", "_"): v for k, v in given.items()}
    for name in given:
        if name not in SCHEMAS[scenario]:
            raise ConfigError(f"unknown parameter {name!r} for scenario {scenario}", code="unknown_key", key=name)
    params: dict = {}
    # frequency and speed first: wavelength-relative lengths depend on them
    order = sorted(SCHEMAS[scenario], key=lambda n: n not in ("frequency", "sound_speed"))
    for name in order:
        spec = SCHEMAS[scenario][name]
        if name in given and given[name] is not None:
            params[name] = _convert(scenario, name, given[name], params)
        else:
            params[name] = spec.default
    _fill_derived(scenario, params)
    return {name: params[name] for name in SCHEMAS[scenario]}


def _fill_derived(scenario, params):
    lam = reference_wavelength(scenario, params)
    if scenario == "ftir" and params["gap"] is None:
        params["gap"] = lam
    if scenario == "lattice":
        if params["d_high"] is None:
            params["d_high"] = lam / (4 * params["n_high"])
        if params["d_low"] is None:
            params["d_low"] = lam / (4 * params["n_low"])
    if scenario == "acoustic":
        for key in ("d_high", "d_low"):
            if params[key] is None:
                params[key] = lam / 4
    if scenario == "waveguide" and params["narrow_width"] > params["wide_width"]:
        raise ConfigError("narrow_width exceeds wide_width", code="out_of_range", key="narrow_width")


def parse_sweep(scenario: str, raw, params: dict) -> Sweep:
    if isinstance(raw, str):
        parts = raw.split(":")
        if len(parts) != 4:
            raise ConfigError(f"sweep must be param:start:stop:steps, got {raw!r}", code="bad_value", key="sweep")
        raw = dict(zip(("param", "start", "stop", "steps"), parts))
    if not isinstance(raw, dict):
        raise ConfigError("sweep must be a string or mapping", code="bad_value", key="sweep")
    for key in raw:
        if key not in ("param", "start", "stop", "steps"):
            raise ConfigError(f"unknown sweep key {key!r}", code="unknown_key", key=f"sweep.{key}")
    missing = [k for k in ("param", "start", "stop", "steps") if k not in raw]
    if missing:
        raise ConfigError(f"sweep missing {', '.join(missing)}", code="bad_value", key="sweep")
    name = str(raw["param"]).replace("-", "_")
    spec = SCHEMAS[scenario].get(name)
    if spec is None:
        raise ConfigError(f"unknown sweep parameter {name!r} for scenario {scenario}", code="unknown_key", key=name)
    if spec.kind == "choice":
        raise ConfigError(f"cannot sweep non-numeric parameter {name!r}", code="bad_value", key=name)
    try:
        steps = int(str(raw["steps"]).strip())
    except ValueError:
        raise ConfigError(f"sweep steps must be an integer, got {raw['steps']!r}", code="bad_value", key="sweep.steps") from None
    if steps < 2:
        raise ConfigError("sweep needs at least 2 steps", code="out_of_range", key="sweep.steps")
    start = _convert(scenario, name, raw["start"], params)
    stop = _convert(scenario, name, raw["stop"], params)
    sweep = Sweep(name, float(start), float(stop), steps)
    if spec.kind == "integer":
        values = sweep.values(integer=True)
        if len(set(values)) != len(values):
            raise ConfigError("integer sweep has repeated values; reduce steps", code="out_of_range", key="sweep.steps")
    return sweep


PULSE_KINDS = {"carrier": "frequency", "envelope_duration": "time", "sample_rate": "frequency", "record_length": "time"}


def parse_pulse(raw, scenario: str, params: dict) -> PulseSpec:
    if raw is None or raw is True:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("pulse must be a mapping", code="bad_value", key="pulse")
    values: dict = {}
    for key, value in raw.items():
        if key == "envelope":
            values[key] = str(value)
        elif key in PULSE_KINDS:
            try:
                values[key] = parse_quantity(value, PULSE_KINDS[key])
            except ValueError as exc:
                raise ConfigError(f"pulse.{key}: {exc}", code="bad_value", key=f"pulse.{key}") from None
        else:
            raise ConfigError(f"unknown pulse key {key!r}", code="unknown_key", key=f"pulse.{key}")
    if scenario == "quantum":
        # natural units: omega is the energy
        values.setdefault("carrier", params["energy"] / (2 * math.pi))
    else:
        values.setdefault("carrier", params["frequency"])
    if "sample_rate" not in values:
        values["sample_rate"] = _nice_rate(values["carrier"])
    if "envelope_duration" not in values:
        # about 5 % amplitude bandwidth
        values["envelope_duration"] = 4 * math.log(2) / (math.pi * 0.048 * values["carrier"])
    values.setdefault("record_length", 20 * values["envelope_duration"])
    try:
        return PulseSpec(**values)
    except ValueError as exc:
        raise ConfigError(f"pulse: {exc}", code="out_of_range", key="pulse") from None


def _nice_rate(carrier):
    # smallest 1-2-5 value above 10x the carrier
    target = 10 * carrier
    exp = math.floor(math.log10(target))
    for m in (1, 2, 5, 10):
        if m * 10**exp > target:
            return float(m * 10**exp)


def _parse_outputs(raw) -> tuple:
    if isinstance(raw, str):
        raw = [s for s in raw.split(",") if s.strip()]
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError("outputs must be a nonempty list", code="bad_value", key="outputs")
    names = [str(s).strip() for s in raw]
    for name in names:
        if name not in OUTPUTS:
            raise ConfigError(f"unknown output {name!r} (known: {', '.join(OUTPUTS)})", code="out_of_range", key="outputs")
    return tuple(o for o in OUTPUTS if o in names)


def build_config(
    scenario: str,
    params: Optional[dict] = None,
    sweep=None,
    pulse=None,
    outputs=None,
    fmt: Optional[str] = None,
    out: Optional[str] = None,
) -> RunConfig:
    resolved = resolve_params(scenario, params or {})
    outputs_t = _parse_outputs(outputs) if outputs is not None else ("timing",)
    for name in ("gh", "virtuality"):
        if name in outputs_t and scenario != "ftir":
            raise ConfigError(f"output {name!r} is only defined for the ftir scenario", code="out_of_range", key="outputs")
    fmt = "csv" if fmt is None else str(fmt)
    if fmt not in FORMATS:
        raise ConfigError(f"format must be csv or json, got {fmt!r}", code="out_of_range", key="format")
    pulse_spec = None
    if pulse is not None or "pulse" in outputs_t:
        pulse_spec = parse_pulse(pulse, scenario, resolved)
    return RunConfig(
        scenario=scenario,
        params=resolved,
        sweep=parse_sweep(scenario, sweep, resolved) if sweep is not None else None,
        pulse=pulse_spec,
        outputs=outputs_t,
        output_path=str(out) if out is not None else "evanesim_out",
        format=fmt,
    )


def parse_config(text: str, scenario: Optional[str] = None) -> RunConfig:
    """Parse a YAML config document; ``scenario`` fills in a missing ``scenario`` key."""
    try:
        doc = yaml.safe_load(text) if text.strip() else {}
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        column = mark.column + 1 if mark is not None else None
        raise ConfigError(f"syntax error: {getattr(exc, 'problem', exc)}", code="syntax", line=line, column=column) from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping", code="syntax", line=1, column=1)
    for key in doc:
        if key not in TOP_KEYS:
            raise ConfigError(f"unknown key {key!r}", code="unknown_key", key=str(key))
    scen = doc.get("scenario", scenario)
    if scenario is not None and scen != scenario:
        raise ConfigError(f"config is for scenario {scen!r}, not {scenario!r}", code="out_of_range", key="scenario")
    if scen is None:
        raise ConfigError("no scenario given", code="bad_value", key="scenario")
    return build_config(
        str(scen),
        doc.get("params") or {},
        sweep=doc.get("sweep"),
        pulse=doc.get("pulse"),
        outputs=doc.get("outputs"),
        fmt=doc.get("format"),
        out=doc.get("out"),
    )


def _quantity_text(value, kind):
    if kind in ("choice",):
        return value
    if kind == "integer":
        return int(value)
    unit = BASE_UNIT[kind]
    return f"{float(value)!r}{unit}" if unit else float(value)


def config_to_dict(config: RunConfig) -> dict:
    """Canonical, unit-explicit form; ``parse_config(dump_config(c)) == c``."""
    schema = SCHEMAS[config.scenario]
    doc: dict = {
        "scenario": config.scenario,
        "params": {k: _quantity_text(v, schema[k].kind) for k, v in config.params.items()},
    }
    if config.sweep is not None:
        kind = schema[config.sweep.param].kind
        doc["sweep"] = {
            "param": config.sweep.param,
            "start": _quantity_text(config.sweep.start, kind),
            "stop": _quantity_text(config.sweep.stop, kind),
            "steps": config.sweep.steps,
        }
    if config.pulse is not None:
        p = config.pulse
        doc["pulse"] = {
            "carrier": f"{p.carrier!r}Hz",
            "envelope": p.envelope,
            "envelope_duration": f"{p.envelope_duration!r}s",
            "sample_rate": f"{p.sample_rate!r}Hz",
            "record_length": f"{p.record_length!r}s",
        }
    doc["outputs"] = list(config.outputs)
    doc["format"] = config.format
    doc["out"] = config.output_path
    return doc


def dump_config(config: RunConfig) -> str:
    return yaml.safe_dump(config_to_dict(config), sort_keys=False, default_flow_style=False)
