"""Media, dispersion relations and complex longitudinal wavenumbers.

Every material descriptor here reduces, at a given angular frequency and
transverse wavenumber, to a longitudinal wavenumber ``kz`` and a flux weight
``w`` (see :mod:`evanesim.conventions`).  The descriptors accept scalar or
array ``omega`` so spectra can be evaluated in one vectorized pass.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

import numpy as np

from .conventions import SPEED_OF_LIGHT
from .errors import DomainError

# |kz^2| below this fraction of the dispersion scale is snapped to exact cutoff
_CUTOFF_RTOL = 64 * np.finfo(float).eps


class Polarization(str, enum.Enum):
    TE = "TE"
    TM = "TM"  # electric field in the plane of incidence


class Classification(str, enum.Enum):
    PROPAGATING = "Propagating"
    EVANESCENT = "Evanescent"
    CUTOFF = "Cutoff"


def decaying_sqrt(kz2, scale=None):
    """Square root of a real ``kz**2`` on the branch Re >= 0, Im >= 0.

    Returns a complex value that is exactly real or exactly imaginary.  Values
    with ``|kz2| <= 64*eps*scale`` are treated as exact cutoff.
    """
    kz2 = np.asarray(kz2, dtype=float)
    if scale is not None:
        kz2 = np.where(np.abs(kz2) <= _CUTOFF_RTOL * np.asarray(scale), 0.0, kz2)
    root = np.sqrt(np.abs(kz2))
    out = np.where(kz2 >= 0, root + 0j, 1j * root)
    return out[()] if out.ndim == 0 else out


def classify(value: complex) -> Classification:
    value = complex(value)
    if value == 0:
        return Classification.CUTOFF
    if value.imag != 0:
        return Classification.EVANESCENT
    return Classification.PROPAGATING


@dataclass(frozen=True)
class WaveNumber:
    value: complex
    classification: Classification

    @classmethod
    def of(cls, value) -> "WaveNumber":
        value = complex(value)
        return cls(value, classify(value))

    @property
    def kappa(self) -> float:
        """Decay constant (0 for propagating modes)."""
        return self.value.imag

    @property
    def is_evanescent(self) -> bool:
        return self.classification is Classification.EVANESCENT


@dataclass(frozen=True)
class Medium:
    """Lossless dielectric with (optionally frequency-dependent) real index."""

    refractive_index: float
    label: str = ""
    dispersion: Optional[Callable[[float], float]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if not self.refractive_index > 0:
            raise ValueError(f"refractive index must be positive, got {self.refractive_index}")

    def index(self, omega=None):
        if self.dispersion is None or omega is None:
            return self.refractive_index
        return self.dispersion(omega)

    def kz(self, omega, ctx: "ObliqueContext"):
        n = self.index(omega)
        k0 = np.asarray(omega) / SPEED_OF_LIGHT
        kx = ctx.kx(omega)
        scale = np.maximum((k0 * n) ** 2, kx**2)
        return decaying_sqrt((k0 * n) ** 2 - kx**2, scale)

    def weight(self, omega, ctx: "ObliqueContext"):
        if ctx.polarization is Polarization.TM:
            return self.index(omega) ** 2
        return 1.0


@dataclass(frozen=True)
class ObliqueContext:
    """Incidence geometry.

    ``kx = (omega/c) * n_incident * sin(angle)``.  With ``reference_omega``
    unset this is linear in frequency (fixed angle).  With it set, ``kx`` is
    pinned at its value at ``reference_omega`` so a frequency sweep keeps the
    transverse wavenumber conserved, which is what a beam of fixed lateral
    structure sees.
    """

    incidence_angle: float = 0.0
    polarization: Polarization = Polarization.TE
    incident_medium: Medium = Medium(1.0, "vacuum")
    reference_omega: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.incidence_angle < math.pi / 2:
            raise ValueError(f"incidence angle must lie in [0, pi/2), got {self.incidence_angle}")
        object.__setattr__(self, "polarization", Polarization(self.polarization))

    def kx(self, omega):
        w = omega if self.reference_omega is None else self.reference_omega
        n = self.incident_medium.index(w)
        out = np.asarray(w, dtype=float) / SPEED_OF_LIGHT * n * math.sin(self.incidence_angle)
        if self.reference_omega is not None:
            out = np.broadcast_to(out, np.shape(omega))
        return out[()] if np.ndim(out) == 0 else out

    def frequency_linear(self) -> "ObliqueContext":
        return ObliqueContext(self.incidence_angle, self.polarization, self.incident_medium)

    def pinned(self, omega: float) -> "ObliqueContext":
        return ObliqueContext(self.incidence_angle, self.polarization, self.incident_medium, omega)


NORMAL_INCIDENCE = ObliqueContext()


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform, strictly increasing angular-frequency grid (rad/s)."""

    angular_frequencies: np.ndarray
    center_frequency: float

    def __post_init__(self):
        w = np.asarray(self.angular_frequencies, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("grid must be a nonempty 1D sequence")
        if w.size > 1:
            step = np.diff(w)
            if np.any(step <= 0):
                raise ValueError("grid must be strictly increasing")
            if np.max(np.abs(step - step.mean())) > 1e-6 * step.mean():
                raise ValueError("grid must be uniformly spaced")
        object.__setattr__(self, "angular_frequencies", w)

    @classmethod
    def around(cls, f0: float, rel_halfwidth: float, points: int) -> "FrequencyGrid":
        w0 = 2 * math.pi * f0
        return cls(np.linspace(w0 * (1 - rel_halfwidth), w0 * (1 + rel_halfwidth), points), f0)

    @property
    def step(self) -> float:
        w = self.angular_frequencies
        return float(w[1] - w[0]) if w.size > 1 else 0.0

    def __len__(self):
        return self.angular_frequencies.size


class Section(Protocol):
    """Anything a stack region can be made of."""

    def kz(self, omega, ctx: ObliqueContext): ...

    def weight(self, omega, ctx: ObliqueContext): ...


@dataclass(frozen=True)
class WaveguideSection:
    """Air-filled rectangular guide of broad-wall width ``width``, TE10 only."""

    width: float
    fill_index: float = 1.0
    label: str = ""

    def __post_init__(self):
        if not (self.width > 0 and self.fill_index > 0):
            raise ValueError("waveguide width and fill index must be positive")

    def kz(self, omega, ctx=None):
        k = np.asarray(omega) * self.fill_index / SPEED_OF_LIGHT
        kc = math.pi / self.width
        return decaying_sqrt(k**2 - kc**2, np.maximum(k**2, kc**2))

    def weight(self, omega, ctx=None):
        return 1.0

    def cutoff_frequency(self) -> float:
        return SPEED_OF_LIGHT / (2 * self.width * self.fill_index)


@dataclass(frozen=True)
class AcousticMedium:
    """Fluid segment; ``impedance`` is the (possibly area-scaled) acoustic impedance."""

    sound_speed: float
    impedance: float
    label: str = ""

    def __post_init__(self):
        if not (self.sound_speed > 0 and self.impedance > 0):
            raise ValueError("sound speed and impedance must be positive")

    def kz(self, omega, ctx=None):
        return np.asarray(omega) / self.sound_speed + 0j

    def weight(self, omega, ctx=None):
        # pressure field: continuity of (1/rho) dp/dz, rho = Z/c
        return self.impedance / self.sound_speed


@dataclass(frozen=True)
class QuantumRegion:
    """Constant-potential region, natural units hbar = 1; ``omega`` is the energy."""

    potential: float = 0.0
    mass: float = 1.0
    label: str = ""

    def kz(self, omega, ctx=None):
        e = np.asarray(omega, dtype=float)
        return decaying_sqrt(2 * self.mass * (e - self.potential), 2 * self.mass * np.maximum(np.abs(e), abs(self.potential)))

    def weight(self, omega, ctx=None):
        return self.mass


def longitudinal_wavenumber(medium: Medium, ctx: ObliqueContext, omega: float) -> WaveNumber:
    """``kz = sqrt((omega/c)^2 n^2 - kx^2)`` on the decaying branch."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    return WaveNumber.of(medium.kz(omega, ctx))


def critical_angle(n_dense: float, n_rare: float) -> float:
    if not n_rare > 0:
        raise ValueError("indices must be positive")
    if n_dense < n_rare:
        raise DomainError(f"no total reflection from n={n_dense} into n={n_rare}")
    return math.asin(n_rare / n_dense)


def waveguide_wavenumber(width: float, omega: float, fill_index: float = 1.0) -> WaveNumber:
    """TE10 propagation constant; imaginary below ``f_c = c/(2a)``."""
    if not (width > 0 and omega > 0):
        raise ValueError("width and omega must be positive")
    return WaveNumber.of(WaveguideSection(width, fill_index).kz(omega))
