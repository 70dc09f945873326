"""Sweep execution: one pure task per sweep point, tables merged in sweep order."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .. import __version__
from ..conventions import SPEED_OF_LIGHT, convention_hash
from ..errors import DomainError
from ..pulse import propagate, synthesize, channel_grid
from ..scenarios import (
    DoublePrismSpec,
    QuantumBarrierSpec,
    bloch_kappa,
    double_prism,
    goos_haenchen_shift,
    photonic_lattice,
    quantum_barrier,
    acoustic_array,
    undersized_waveguide,
)
from ..timing import SATURATION_WINDOW, barrier_kappa, delays_at, saturation_value
from ..virtuality import uncertainty_report
from ..wavecore import AcousticMedium, FrequencyGrid
from ..xfermat import scatter_spectrum
from .config import LENGTH_PARAM, SCHEMAS, RunConfig, config_to_dict

WORKERS_ENV = "EVANESIM_WORKERS"
SCATTER_REL_HALFWIDTH = 0.1
SCATTER_POINTS = 201
HARTMAN_KAPPA_D = (0.25, 12.0, 48)


@dataclass(frozen=True)
class Table:
    columns: tuple
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))


@dataclass(frozen=True)
class ResultBundle:
    config: RunConfig
    tables: dict
    provenance: dict


@dataclass
class Setup:
    """A scenario instantiated at one parameter point."""

    builder: Callable  # length-parameter value -> Stack
    omega0: float
    length: float  # current value of the length parameter
    to_metres: Callable  # length-parameter value -> barrier length
    kappa: float
    time_unit: str = "s"
    length_unit: str = "m"
    freq_label: str = "f[Hz]"
    integer_length: bool = False
    prism: Optional[DoublePrismSpec] = None


def setup_for(scenario: str, p: dict) -> Setup:
    if scenario == "ftir":
        spec = DoublePrismSpec(p["prism_index"], p["gap"], p["angle"], p["polarization"], p["frequency"], p["gap_index"])
        builder = lambda d: double_prism(spec.with_gap(d))
        kappa = complex(spec.gap_kz()).imag if complex(spec.gap_kz()).real == 0 else 0.0
        return Setup(builder, spec.omega0, p["gap"], float, kappa, prism=spec)
    if scenario == "waveguide":
        omega0 = 2 * math.pi * p["frequency"]
        builder = lambda d: undersized_waveguide(p["wide_width"], p["narrow_width"], d)
        return Setup(builder, omega0, p["length"], float, barrier_kappa(builder(p["length"]), omega0))
    if scenario == "lattice":
        omega0 = 2 * math.pi * p["frequency"]
        builder = lambda n: photonic_lattice(p["n_high"], p["n_low"], p["d_high"], p["d_low"], int(n))
        period = p["d_high"] + p["d_low"]
        return Setup(builder, omega0, p["periods"], lambda n: n * period,
                     bloch_kappa(builder(1), omega0), integer_length=True)
    if scenario == "acoustic":
        omega0 = 2 * math.pi * p["frequency"]
        hi = AcousticMedium(p["sound_speed"], p["impedance_high"], "high")
        lo = AcousticMedium(p["sound_speed"], p["impedance_low"], "low")
        builder = lambda n: acoustic_array([(hi, p["d_high"]), (lo, p["d_low"])] * int(n), entry=lo)
        period = p["d_high"] + p["d_low"]
        return Setup(builder, omega0, p["periods"], lambda n: n * period,
                     bloch_kappa(builder(1), omega0), integer_length=True)
    if scenario == "quantum":
        builder = lambda L: quantum_barrier(QuantumBarrierSpec(p["barrier_height"], L, p["energy"]))
        spec = QuantumBarrierSpec(p["barrier_height"], p["length"], p["energy"])
        return Setup(builder, p["energy"], p["length"], float, spec.kappa,
                     time_unit="hbar/E", length_unit="a.u.", freq_label="E[a.u.]")
    raise DomainError(f"unknown scenario {scenario!r}")


def _scan_lengths(s: Setup) -> list:
    lo, hi, n = HARTMAN_KAPPA_D
    if s.kappa <= 0:
        raise DomainError("barrier is not evanescent at the operating frequency")
    if s.integer_length:
        unit = s.to_metres(1) * s.kappa
        return list(range(1, int(math.ceil(hi / unit)) + 1))
    return [float(x) for x in np.linspace(lo, hi, n) / s.kappa]


def _timing_row(s: Setup, length):
    tau_t, tau_r = delays_at(s.builder(length), s.omega0)
    f0 = s.omega0 / (2 * math.pi)
    return s.to_metres(length), tau_t, tau_r, tau_t * f0


def _saturation_row(s: Setup):
    if s.kappa <= 0:
        raise DomainError("barrier is not evanescent at the operating frequency")
    lo, hi = SATURATION_WINDOW
    if s.integer_length:
        unit = s.to_metres(1) * s.kappa
        lengths = [n for n in range(1, int(hi / unit) + 2) if lo <= n * unit <= hi]
        if not lengths:
            lengths = [int(math.ceil(lo / unit))]
    else:
        lengths = list(np.linspace(lo, hi, 11) / s.kappa)
    d = np.array([s.to_metres(n) for n in lengths])
    taus = np.array([delays_at(s.builder(n), s.omega0)[0] for n in lengths])
    kd = s.kappa * d
    if not np.any((kd >= lo) & (kd <= hi)):
        raise DomainError("unit cell too long to sample the saturation window")
    tau = saturation_value(kd, taus)
    return s.kappa, tau, tau * s.omega0 / (2 * math.pi)


def evaluate_point(scenario: str, outputs: tuple, params: dict, pulse_spec, sweep_param: Optional[str]):
    """All requested tables for one parameter point (rows without the sweep column)."""
    s = setup_for(scenario, params)
    tables = {}
    u, L = s.time_unit, s.length_unit
    if "scatter" in outputs:
        grid = FrequencyGrid(
            np.linspace(s.omega0 * (1 - SCATTER_REL_HALFWIDTH), s.omega0 * (1 + SCATTER_REL_HALFWIDTH), SCATTER_POINTS),
            s.omega0 / (2 * math.pi),
        )
        sp = scatter_spectrum(s.builder(s.length), grid)
        scale = 1.0 if scenario == "quantum" else 1 / (2 * math.pi)
        rows = [
            (w * scale, r.real, r.imag, t.real, t.imag, pr, pt, abs(r) ** 2, fl * abs(t) ** 2)
            for w, r, t, pr, pt, fl in zip(sp.omega, sp.r, sp.t, sp.phase_r, sp.phase_t, sp.flux)
        ]
        tables["scatter"] = (
            (s.freq_label, "re_r[-]", "im_r[-]", "re_t[-]", "im_t[-]", "phase_r[rad]", "phase_t[rad]", "R[-]", "T[-]"),
            rows,
        )
    if "timing" in outputs:
        tables["timing"] = ((f"d[{L}]", f"tau_t[{u}]", f"tau_r[{u}]", "ratio[-]"), [_timing_row(s, s.length)])
        kappa_unit = "1/a.u." if scenario == "quantum" else "1/m"
        tables["saturation"] = (
            (f"kappa[{kappa_unit}]", f"tau_asymptotic[{u}]", "universal_ratio[-]"),
            [_saturation_row(s)],
        )
    if "hartman" in outputs:
        lengths = [s.length] if sweep_param == LENGTH_PARAM[scenario] else _scan_lengths(s)
        rows = []
        for n in lengths:
            d, tau_t, tau_r, _ = _timing_row(s, n)
            rows.append((d, s.kappa * d, tau_t, tau_r))
        tables["hartman"] = ((f"d[{L}]", "kappa_d[-]", f"tau_t[{u}]", f"tau_r[{u}]"), rows)
    if "gh" in outputs:
        spec = s.prism
        shift = goos_haenchen_shift(spec, finite_gap=params["gh_mode"] == "finite")
        tau_gh = shift * spec.prism_index * math.sin(spec.incidence_angle) / SPEED_OF_LIGHT
        tables["gh"] = (
            ("angle[rad]", "gh_shift[m]", "gh_over_lambda[-]", "tau_gh[s]"),
            [(spec.incidence_angle, shift, shift / spec.wavelength, tau_gh)],
        )
    if "virtuality" in outputs:
        rep = uncertainty_report(s.prism)
        tables["virtuality"] = (
            ("kappa[1/m]", "E2_sign", "delta_x[m]", "delta_p[kg*m/s]", "delta_n[-]",
             "raised_k_re[1/m]", "raised_k_im[1/m]", "raised_class", "cutoff_index[-]"),
            [(rep.kappa, rep.E_squared_sign.value, rep.delta_x, rep.delta_p_bound, rep.delta_n,
              rep.raised_k.real, rep.raised_k.imag, rep.raised_classification.value, rep.cutoff_index)],
        )
    if "pulse" in outputs:
        incident = synthesize(pulse_spec)
        trace = propagate(incident, scatter_spectrum(s.builder(s.length), channel_grid(incident)))
        tables["pulse"] = (
            (f"t[{u}]", "incident[-]", "reflected[-]", "transmitted[-]"),
            list(zip(trace.time_axis, trace.incident, trace.reflected, trace.transmitted)),
        )
        tables["arrival"] = (
            ("signal", f"peak[{u}]", f"centroid[{u}]", f"half_max_front[{u}]"),
            [(name, a.peak, a.centroid, a.half_max_front) for name, a in trace.arrival.items()],
        )
    return {k: (cols, [tuple(_plain(x) for x in r) for r in rows]) for k, (cols, rows) in tables.items()}


def _plain(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def _task(args):
    index, scenario, outputs, params, pulse_spec, sweep_param = args
    try:
        return evaluate_point(scenario, outputs, params, pulse_spec, sweep_param)
    except DomainError as exc:
        where = f"sweep point {index}" if sweep_param else "configuration"
        if sweep_param:
            where += f" ({sweep_param}={params[sweep_param]!r})"
        raise type(exc)(f"{where}: {exc}") from None


def resolve_workers(workers: Optional[int]) -> int:
    """Flag wins over the environment variable; default 1."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else 1
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return workers


def provenance(config: RunConfig) -> dict:
    return {
        "version": __version__,
        "conventions": convention_hash(),
        "scatter_grid": {"rel_halfwidth": SCATTER_REL_HALFWIDTH, "points": SCATTER_POINTS},
        "phase_time_rel_step": 1e-5,
        "saturation_window_kappa_d": list(SATURATION_WINDOW),
        "hartman_kappa_d": list(HARTMAN_KAPPA_D),
    }


def run(config: RunConfig, workers: Optional[int] = None) -> ResultBundle:
    workers = resolve_workers(workers)
    points = config.points()
    sweep_param = config.sweep.param if config.sweep else None
    tasks = [(i, config.scenario, config.outputs, p, config.pulse, sweep_param) for i, p in enumerate(points)]
    if workers == 1 or len(tasks) == 1:
        results = [_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks, chunksize=chunk))
    tables: dict = {}
    for point, result in zip(points, results):
        for name, (cols, rows) in result.items():
            if sweep_param is not None:
                kind = SCHEMAS[config.scenario][sweep_param].kind
                unit = {"integer": "-", "dimensionless": "-"}.get(kind, _UNIT_LABEL.get(kind, "-"))
                cols = (f"{sweep_param}[{unit}]", *cols)
                rows = [(point[sweep_param], *r) for r in rows]
            entry = tables.setdefault(name, [cols, []])
            entry[1].extend(rows)
    ordered = {name: Table(cols, rows) for name, (cols, rows) in tables.items()}
    return ResultBundle(config, ordered, provenance(config))


_UNIT_LABEL = {"length": "m", "frequency": "Hz", "time": "s", "angle": "rad", "speed": "m/s", "impedance": "rayl"}
