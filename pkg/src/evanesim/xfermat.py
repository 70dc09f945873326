"""2x2 transfer-matrix engine for stratified 1D Helmholtz problems.

Matrix entries may be scalars or numpy arrays (one entry per frequency); all
operations broadcast.  Conventions are in :mod:`evanesim.conventions`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, ResonanceError
from .wavecore import (
    NORMAL_INCIDENCE,
    FrequencyGrid,
    Medium,
    ObliqueContext,
    Polarization,
    Section,
    WaveNumber,
)


@dataclass(frozen=True)
class Layer:
    thickness: float
    medium: Section

    def __post_init__(self):
        if not self.thickness >= 0:
            raise ValueError(f"layer thickness must be >= 0, got {self.thickness}")


@dataclass(frozen=True)
class Stack:
    entry_medium: Section
    layers: tuple = ()
    exit_medium: Optional[Section] = None
    ctx: ObliqueContext = NORMAL_INCIDENCE

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.exit_medium is None:
            object.__setattr__(self, "exit_medium", self.entry_medium)

    @property
    def sections(self) -> list:
        return [self.entry_medium, *(l.medium for l in self.layers), self.exit_medium]

    def reversed(self) -> "Stack":
        return Stack(self.exit_medium, tuple(reversed(self.layers)), self.entry_medium, self.ctx)

    def admittance(self, section, omega):
        return section.kz(omega, self.ctx) / section.weight(omega, self.ctx)

    def flux_factor(self, omega):
        """``Re(q_exit)/Re(q_entry)``; zero when the exit region is evanescent."""
        qa = self.admittance(self.entry_medium, omega)
        qb = self.admittance(self.exit_medium, omega)
        return np.real(qb) / np.real(qa)


@dataclass(frozen=True)
class TransferMatrix:
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    # tracked multiplicatively so evanescent products don't lose it to cancellation
    det: Optional[complex] = field(default=None, compare=False)

    def __post_init__(self):
        if self.det is None:
            object.__setattr__(self, "det", self.m11 * self.m22 - self.m12 * self.m21)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
            self.det * other.det,
        )

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(1 + 0j, 0j, 0j, 1 + 0j, 1 + 0j)


def _interface(q_left, q_right) -> TransferMatrix:
    q_right = np.asarray(q_right)
    if np.any(q_right == 0):
        raise DomainError("interface into a region at exact cutoff (kz = 0)")
    a = np.asarray(q_left) / q_right
    a = a[()] if a.ndim == 0 else a
    return TransferMatrix(0.5 * (1 + a), 0.5 * (1 - a), 0.5 * (1 - a), 0.5 * (1 + a), a)


def interface_matrix(
    kz_left: WaveNumber,
    kz_right: WaveNumber,
    polarization: Polarization = Polarization.TE,
    media: Optional[tuple[Medium, Medium]] = None,
    omega: Optional[float] = None,
) -> TransferMatrix:
    """Fresnel continuity at a planar boundary.

    TM weights the admittance by ``1/n**2`` of the adjoining ``media``.
    """
    if kz_left.value == 0 and kz_right.value == 0:
        raise DomainError("degenerate interface: both sides at cutoff")
    wl = wr = 1.0
    if Polarization(polarization) is Polarization.TM:
        if media is None:
            raise ValueError("TM interface needs the adjoining media")
        wl, wr = media[0].index(omega) ** 2, media[1].index(omega) ** 2
    return _interface(kz_left.value / wl, kz_right.value / wr)


def propagation_matrix(kz, d: float) -> TransferMatrix:
    """``diag(exp(+i kz d), exp(-i kz d))``; real positive for evanescent ``kz``."""
    if not d >= 0:
        raise ValueError("thickness must be >= 0")
    if isinstance(kz, WaveNumber):
        kz = kz.value
    kz = np.asarray(kz)
    if np.all(kz.real == 0):
        # exact zero phase: avoid exp of a complex argument with -0.0 real part
        kappa = kz.imag
        fwd, bwd = np.exp(-kappa * d) + 0j, np.exp(kappa * d) + 0j
    else:
        fwd, bwd = np.exp(1j * kz * d), np.exp(-1j * kz * d)
    fwd = fwd[()] if np.ndim(fwd) == 0 else fwd
    bwd = bwd[()] if np.ndim(bwd) == 0 else bwd
    zero = 0 * fwd
    return TransferMatrix(fwd, zero, zero, bwd, 1 + zero)


def stack_matrix(stack: Stack, omega) -> TransferMatrix:
    sections = stack.sections
    q = [stack.admittance(s, omega) for s in sections]
    m = _interface(q[0], q[1])
    for i, layer in enumerate(stack.layers, start=1):
        if layer.thickness > 0:
            m = propagation_matrix(layer.medium.kz(omega, stack.ctx), layer.thickness) @ m
        m = _interface(q[i], q[i + 1]) @ m
    return m


def scattering_from_matrix(m: TransferMatrix):
    """Return ``(r, t)`` for illumination from the left."""
    m22 = np.asarray(m.m22)
    scale = np.maximum.reduce([np.abs(np.asarray(x)) for x in (m.m11, m.m12, m.m21, m.m22)])
    if np.any(np.abs(m22) <= 1e-14 * scale):
        raise ResonanceError("m22 vanishes: scattering pole on the evaluation grid")
    return -m.m21 / m.m22, m.det / m.m22


def scatter(stack: Stack, omega):
    """``(r, t)`` of ``stack`` at ``omega`` (scalar or array)."""
    return scattering_from_matrix(stack_matrix(stack, omega))


@dataclass(frozen=True)
class ScatterSpectrum:
    grid: FrequencyGrid
    r: np.ndarray
    t: np.ndarray
    phase_r: np.ndarray
    phase_t: np.ndarray
    flux: np.ndarray  # Re(q_exit)/Re(q_entry) per frequency

    @property
    def omega(self) -> np.ndarray:
        return self.grid.angular_frequencies


def scatter_spectrum(stack: Stack, grid: FrequencyGrid) -> ScatterSpectrum:
    w = grid.angular_frequencies
    r, t = scatter(stack, w)
    r = np.asarray(r, dtype=complex) * np.ones_like(w)
    t = np.asarray(t, dtype=complex) * np.ones_like(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        flux = np.asarray(stack.flux_factor(w)) * np.ones_like(w)
    return ScatterSpectrum(grid, r, t, np.unwrap(np.angle(r)), np.unwrap(np.angle(t)), flux)


def power_balance(stack: Stack, omega) -> np.ndarray:
    """``|r|^2 + flux*|t|^2``; 1 for lossless stacks with propagating entry."""
    r, t = scatter(stack, omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = stack.flux_factor(omega)
    return np.abs(r) ** 2 + f * np.abs(t) ** 2


def airy_series_oracle(stack: Stack, omega: float, terms: Optional[int] = None):
    """Multiple-reflection sum for a single-gap stack.

    Sums ``terms`` round trips of the gap; ``terms=None`` uses the closed-form
    geometric sum.  Independent of the matrix product path.
    """
    if len(stack.layers) != 1:
        raise ValueError(f"Airy oracle needs exactly one interior layer, got {len(stack.layers)}")
    if terms is not None and terms < 1:
        raise ValueError("terms must be >= 1")
    gap = stack.layers[0]
    q1, q2, q3 = (complex(stack.admittance(s, omega)) for s in stack.sections)
    kz = complex(gap.medium.kz(omega, stack.ctx))
    # single-pass factor, zero phase when kz is imaginary
    hop = np.exp(-kz.imag * gap.thickness) if kz.real == 0 else np.exp(1j * kz * gap.thickness)
    r12 = (q1 - q2) / (q1 + q2)
    t12 = 2 * q1 / (q1 + q2)
    t21 = 2 * q2 / (q1 + q2)
    r21 = -r12
    r23 = (q2 - q3) / (q2 + q3)
    t23 = 2 * q2 / (q2 + q3)
    ratio = r21 * r23 * hop * hop
    if terms is None:
        series = 1 / (1 - ratio)
    else:
        series = sum(ratio**m for m in range(terms))
    t = t12 * t23 * hop * series
    r = r12 + t12 * t21 * r23 * hop * hop * series
    return complex(r), complex(t)
