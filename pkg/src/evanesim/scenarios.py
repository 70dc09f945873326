"""Stack builders for the barrier geometries, plus the Goos-Haenchen shift."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .conventions import SPEED_OF_LIGHT
from .errors import DomainError
from .wavecore import (
    AcousticMedium,
    Medium,
    ObliqueContext,
    Polarization,
    QuantumRegion,
    WaveguideSection,
    critical_angle,
)
from .xfermat import Layer, Stack, TransferMatrix, _interface, propagation_matrix, scatter

PERSPEX_INDEX = 1.6
EXPERIMENT_FREQUENCY = 9.15e9
EXPERIMENT_ANGLE = math.pi / 4


@dataclass(frozen=True)
class DoublePrismSpec:
    """Two prisms separated by a gap of index ``gap_index``.

    ``gap=None`` means one free-space wavelength at ``center_frequency``.
    With ``hold_kx`` the transverse wavenumber is pinned at the center
    frequency for spectral sweeps.
    """

    prism_index: float = PERSPEX_INDEX
    gap: Optional[float] = None
    incidence_angle: float = EXPERIMENT_ANGLE
    polarization: Polarization = Polarization.TM
    center_frequency: float = EXPERIMENT_FREQUENCY
    gap_index: float = 1.0
    hold_kx: bool = True

    def __post_init__(self):
        object.__setattr__(self, "polarization", Polarization(self.polarization))
        if self.gap is None:
            object.__setattr__(self, "gap", self.wavelength)
        if not self.gap >= 0:
            raise ValueError("gap must be >= 0")
        if not (self.prism_index > 0 and self.gap_index > 0 and self.center_frequency > 0):
            raise ValueError("indices and frequency must be positive")

    @property
    def omega0(self) -> float:
        return 2 * math.pi * self.center_frequency

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.center_frequency

    @property
    def critical_angle(self) -> float:
        return critical_angle(self.prism_index, self.gap_index)

    def context(self) -> ObliqueContext:
        return ObliqueContext(
            self.incidence_angle,
            self.polarization,
            Medium(self.prism_index, "prism"),
            self.omega0 if self.hold_kx else None,
        )

    def gap_kz(self, omega: Optional[float] = None):
        omega = self.omega0 if omega is None else omega
        return Medium(self.gap_index, "gap").kz(omega, self.context())

    def with_gap(self, gap: float) -> "DoublePrismSpec":
        return replace(self, gap=gap)


def double_prism(spec: DoublePrismSpec) -> Stack:
    prism = Medium(spec.prism_index, "prism")
    gap = Medium(spec.gap_index, "gap")
    return Stack(prism, (Layer(spec.gap, gap),), prism, spec.context())


def ftir_equivalent(k: float, kappa: float, d: float, prism_index: float = PERSPEX_INDEX):
    """TE double prism whose prism wavenumber is ``k`` and gap decay is ``kappa``.

    Returns ``(spec, omega)``.  Solves ``k0^2 (n^2 - 1) = k^2 + kappa^2`` and
    ``kx^2 = k0^2 + kappa^2``.
    """
    k0 = math.sqrt((k * k + kappa * kappa) / (prism_index**2 - 1))
    kx = math.sqrt(k0 * k0 + kappa * kappa)
    omega = k0 * SPEED_OF_LIGHT
    spec = DoublePrismSpec(
        prism_index=prism_index,
        gap=d,
        incidence_angle=math.asin(kx / (k0 * prism_index)),
        polarization=Polarization.TE,
        center_frequency=omega / (2 * math.pi),
    )
    return spec, omega


def undersized_waveguide(wide_width: float, narrow_width: float, narrow_length: float) -> Stack:
    """Propagating guide | narrow (below-cutoff) section | propagating guide."""
    if not (wide_width > 0 and narrow_width > 0 and narrow_length > 0):
        raise ValueError("waveguide dimensions must be positive")
    if narrow_width > wide_width:
        raise ValueError("narrow section wider than the feed guide")
    wide = WaveguideSection(wide_width, label="feed")
    return Stack(wide, (Layer(narrow_length, WaveguideSection(narrow_width, label="barrier")),), wide)


def photonic_lattice(
    n_high: float,
    n_low: float,
    d_high: float,
    d_low: float,
    periods: int,
    ambient_index: Optional[float] = None,
    ctx: ObliqueContext = ObliqueContext(),
) -> Stack:
    """``periods`` repetitions of (high, low) embedded in ``ambient_index`` (default ``n_low``)."""
    if periods < 1:
        raise ValueError("periods must be >= 1")
    if not (n_high > 0 and n_low > 0 and d_high > 0 and d_low > 0):
        raise ValueError("indices and thicknesses must be positive")
    hi, lo = Medium(n_high, "high"), Medium(n_low, "low")
    ambient = Medium(n_low if ambient_index is None else ambient_index, "ambient")
    return Stack(ambient, (Layer(d_high, hi), Layer(d_low, lo)) * periods, ambient, ctx)


def quarter_wave_lattice(n_high: float, n_low: float, f0: float, periods: int, **kwargs) -> Stack:
    lam = SPEED_OF_LIGHT / f0
    return photonic_lattice(n_high, n_low, lam / (4 * n_high), lam / (4 * n_low), periods, **kwargs)


def unit_cell_matrix(stack: Stack, omega) -> TransferMatrix:
    """Matrix of the first (high, low) period of a lattice, in the low-medium basis."""
    hi, lo = stack.layers[0], stack.layers[1]
    q_hi, q_lo = stack.admittance(hi.medium, omega), stack.admittance(lo.medium, omega)
    m = propagation_matrix(hi.medium.kz(omega, stack.ctx), hi.thickness) @ _interface(q_lo, q_hi)
    m = _interface(q_hi, q_lo) @ m
    return propagation_matrix(lo.medium.kz(omega, stack.ctx), lo.thickness) @ m


def bloch_half_trace(stack: Stack, omega):
    """``(m11 + m22)/2`` of the unit cell; ``|.| > 1`` marks a forbidden band."""
    m = unit_cell_matrix(stack, omega)
    return np.real(0.5 * (m.m11 + m.m22))


def bloch_kappa(stack: Stack, omega) -> float:
    """Bloch decay constant per unit length (0 in a pass band)."""
    period = stack.layers[0].thickness + stack.layers[1].thickness
    half = abs(float(bloch_half_trace(stack, omega)))
    return math.acosh(half) / period if half > 1 else 0.0


def acoustic_array(
    segments: Sequence[tuple[AcousticMedium, float]],
    entry: Optional[AcousticMedium] = None,
    exit: Optional[AcousticMedium] = None,
) -> Stack:
    """Normal-incidence chain of fluid segments.

    ``entry`` defaults to the first segment's medium, ``exit`` to ``entry``.
    """
    segments = list(segments)
    if not segments:
        raise ValueError("acoustic array needs at least one segment")
    for medium, length in segments:
        if not isinstance(medium, AcousticMedium):
            raise TypeError(f"expected AcousticMedium, got {type(medium).__name__}")
        if not length > 0:
            raise ValueError(f"segment length must be positive, got {length}")
    entry = segments[0][0] if entry is None else entry
    exit = entry if exit is None else exit
    return Stack(entry, tuple(Layer(length, m) for m, length in segments), exit)


def quarter_wave_acoustic_array(
    f0: float,
    impedance_high: float,
    impedance_low: float,
    periods: int,
    sound_speed: float = 343.0,
) -> Stack:
    """Alternating-impedance duct (e.g. alternating cross sections) with a gap at ``f0``."""
    quarter = sound_speed / (4 * f0)
    hi = AcousticMedium(sound_speed, impedance_high, "high")
    lo = AcousticMedium(sound_speed, impedance_low, "low")
    return acoustic_array([(hi, quarter), (lo, quarter)] * periods, entry=lo)


@dataclass(frozen=True)
class QuantumBarrierSpec:
    """Rectangular barrier in natural units (hbar = m = 1)."""

    barrier_height: float = 1.0
    barrier_length: float = 6.0
    particle_energy: float = 0.5

    def __post_init__(self):
        if not (self.barrier_height >= 0 and self.barrier_length > 0 and self.particle_energy > 0):
            raise ValueError("need V0 >= 0, L > 0, E > 0")

    @property
    def k(self) -> float:
        return math.sqrt(2 * self.particle_energy)

    @property
    def kappa(self) -> float:
        """Decay constant inside the barrier (0 above the barrier top)."""
        return math.sqrt(max(2 * (self.barrier_height - self.particle_energy), 0.0))


def quantum_barrier(spec: QuantumBarrierSpec) -> Stack:
    free = QuantumRegion(0.0, label="free")
    return Stack(free, (Layer(spec.barrier_length, QuantumRegion(spec.barrier_height, label="barrier")),), free)


def quantum_equivalent(k: float, kappa: float, d: float) -> QuantumBarrierSpec:
    return QuantumBarrierSpec(barrier_height=(k * k + kappa * kappa) / 2, barrier_length=d, particle_energy=k * k / 2)


def _reflection_at_kx(spec: DoublePrismSpec, omega: float, kx: float, finite_gap: bool) -> complex:
    prism = Medium(spec.prism_index, "prism")
    angle = math.asin(kx / (omega / SPEED_OF_LIGHT * spec.prism_index))
    ctx = ObliqueContext(angle, spec.polarization, prism, omega)
    if finite_gap:
        stack = double_prism(replace(spec, incidence_angle=angle))
        stack = Stack(stack.entry_medium, stack.layers, stack.exit_medium, ctx)
    else:
        stack = Stack(prism, (), Medium(spec.gap_index, "gap"), ctx)
    return complex(scatter(stack, omega)[0])


def goos_haenchen_shift(
    spec: DoublePrismSpec,
    omega: Optional[float] = None,
    finite_gap: bool = False,
    rel_step: float = 1e-6,
) -> float:
    """Lateral shift ``-d(arg r)/d(kx)`` of the totally reflected beam, in metres.

    By default ``r`` is the single prism/gap interface (semi-infinite gap);
    ``finite_gap=True`` uses the double-prism reflection instead.
    """
    omega = spec.omega0 if omega is None else omega
    theta_c = spec.critical_angle
    if not spec.incidence_angle > theta_c:
        raise DomainError(
            f"angle {math.degrees(spec.incidence_angle):.4g} deg is not beyond the "
            f"critical angle {math.degrees(theta_c):.4g} deg"
        )
    k_prism = omega / SPEED_OF_LIGHT * spec.prism_index
    kx = k_prism * math.sin(spec.incidence_angle)
    kx_c = k_prism * math.sin(theta_c)
    h = min(rel_step * kx, 0.25 * (kx - kx_c), 0.25 * (k_prism - kx))
    r_plus = _reflection_at_kx(spec, omega, kx + h, finite_gap)
    r_minus = _reflection_at_kx(spec, omega, kx - h, finite_gap)
    return -float(np.angle(r_plus / r_minus)) / (2 * h)
