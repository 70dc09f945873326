"""Phase-time delays, Hartman scans and the universal tunneling-time ratio."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, GridError
from .wavecore import FrequencyGrid
from .xfermat import ScatterSpectrum, Stack, scatter_spectrum

MAX_PHASE_STEP = math.pi / 4
SATURATION_WINDOW = (5.0, 10.0)  # kappa*d range averaged for the asymptotic delay

StackBuilder = Callable[[float], Stack]


def phase_time(spectrum: ScatterSpectrum, channel: str = "transmission") -> np.ndarray:
    """Group delay ``d(phase)/d(omega)`` per grid point.

    Central differences inside, one-sided at the ends.
    """
    if channel not in ("transmission", "reflection"):
        raise ValueError(f"unknown channel {channel!r}")
    phase = spectrum.phase_t if channel == "transmission" else spectrum.phase_r
    w = spectrum.omega
    if w.size < 3:
        raise GridError("phase time needs at least 3 grid points")
    steps = np.abs(np.diff(phase))
    if np.any(steps > MAX_PHASE_STEP):
        raise GridError(
            f"phase step {steps.max():.3f} rad exceeds pi/4; refine the frequency grid"
        )
    return np.gradient(phase, w)


def quantum_phase_time(spectrum: ScatterSpectrum, hbar: float = 1.0) -> np.ndarray:
    """``hbar * d(arg t)/dE`` for a spectrum whose grid holds energies."""
    return hbar * phase_time(spectrum, "transmission")


def delays_at(stack: Stack, omega0: float, rel_step: float = 1e-5) -> tuple[float, float]:
    """Transmission and reflection phase times at a single frequency."""
    grid = FrequencyGrid(omega0 * np.array([1 - rel_step, 1.0, 1 + rel_step]), omega0 / (2 * math.pi))
    spec = scatter_spectrum(stack, grid)
    return float(phase_time(spec, "transmission")[1]), float(phase_time(spec, "reflection")[1])


def delay_curve(builder: StackBuilder, omega0: float, d_values: Sequence[float]):
    """``(tau_t, tau_r)`` arrays for each barrier length in ``d_values``."""
    taus = [delays_at(builder(d), omega0) for d in d_values]
    tau = np.array(taus, dtype=float).reshape(-1, 2)
    return tau[:, 0], tau[:, 1]


def barrier_kappa(stack: Stack, omega0: float) -> float:
    """Largest decay constant among the interior layers; 0 if none is evanescent."""
    kappas = [
        complex(layer.medium.kz(omega0, stack.ctx)).imag
        for layer in stack.layers
        if complex(layer.medium.kz(omega0, stack.ctx)).real == 0
    ]
    return max(kappas, default=0.0)


@dataclass(frozen=True)
class HartmanCurve:
    d: np.ndarray
    tau_t: np.ndarray
    tau_r: np.ndarray
    kappa: float
    tau_asymptotic: float

    @property
    def kappa_d(self) -> np.ndarray:
        return self.kappa * self.d

    def rows(self):
        return list(zip(self.d.tolist(), self.tau_t.tolist(), self.tau_r.tolist()))


def saturation_value(kappa_d: np.ndarray, tau: np.ndarray) -> float:
    lo, hi = SATURATION_WINDOW
    window = (kappa_d >= lo * (1 - 1e-9)) & (kappa_d <= hi * (1 + 1e-9))
    if not np.any(window):
        raise DomainError(f"no scan point with kappa*d in [{lo}, {hi}]")
    return float(np.mean(tau[window]))


def hartman_scan(
    builder: StackBuilder,
    omega0: float,
    d_values: Sequence[float],
    kappa: Optional[float] = None,
) -> HartmanCurve:
    """Phase time versus barrier length and its saturated value.

    ``kappa`` defaults to the decay constant of the evanescent layer of
    ``builder(d)``; pass it explicitly for Bloch-gap barriers.
    """
    d = np.asarray(d_values, dtype=float)
    if d.size == 0 or np.any(d <= 0) or np.any(np.diff(d) <= 0):
        raise ValueError("d_values must be positive and strictly increasing")
    if kappa is None:
        kappa = barrier_kappa(builder(float(d[0])), omega0)
    if not kappa > 0:
        raise DomainError("barrier is not evanescent at the scan frequency")
    tau_t, tau_r = delay_curve(builder, omega0, d)
    return HartmanCurve(d, tau_t, tau_r, kappa, saturation_value(kappa * d, tau_t))


def saturation_lengths(kappa: float, points: int = 11) -> np.ndarray:
    """Barrier lengths spanning the saturation window."""
    lo, hi = SATURATION_WINDOW
    return np.linspace(lo, hi, points) / kappa


def universal_ratio(tau_asymptotic: float, f0: float) -> float:
    if not (tau_asymptotic > 0 and f0 > 0):
        raise ValueError("delay and frequency must be positive")
    return tau_asymptotic * f0


@dataclass(frozen=True)
class TimingReport:
    tau_transmission: np.ndarray
    tau_reflection: np.ndarray
    tau_asymptotic: float
    universal_ratio: float
    hartman_curve: HartmanCurve
    gh_shift: Optional[float] = None
    frequencies: Optional[np.ndarray] = field(default=None, repr=False)


def timing_report(
    builder: StackBuilder,
    d: float,
    grid: FrequencyGrid,
    d_values: Optional[Sequence[float]] = None,
    kappa: Optional[float] = None,
    gh_shift: Optional[float] = None,
) -> TimingReport:
    """Phase times on ``grid`` at length ``d`` plus a Hartman scan at the grid center."""
    omega0 = 2 * math.pi * grid.center_frequency
    spectrum = scatter_spectrum(builder(d), grid)
    if kappa is None:
        kappa = barrier_kappa(builder(d), omega0)
    if d_values is None:
        d_values = saturation_lengths(kappa) if kappa > 0 else None
    if d_values is None:
        raise DomainError("barrier is not evanescent at the scan frequency")
    curve = hartman_scan(builder, omega0, d_values, kappa)
    return TimingReport(
        tau_transmission=phase_time(spectrum, "transmission"),
        tau_reflection=phase_time(spectrum, "reflection"),
        tau_asymptotic=curve.tau_asymptotic,
        universal_ratio=universal_ratio(curve.tau_asymptotic, grid.center_frequency),
        hartman_curve=curve,
        gh_shift=gh_shift,
        frequencies=grid.angular_frequencies / (2 * math.pi),
    )
