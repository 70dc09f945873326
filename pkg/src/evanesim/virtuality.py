"""Non-classicality diagnostics of evanescent modes.

``einstein_check`` reports the sign of ``E^2 = (hbar k c)^2`` for a complex
wavenumber.  ``uncertainty_report`` gives the localization length of the gap
mode, the momentum bound ``hbar*kappa``, and the index increment that lifts
the mode back to propagation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .conventions import HBAR, SPEED_OF_LIGHT
from .errors import DomainError
from .scenarios import DoublePrismSpec
from .wavecore import Classification, Medium, WaveNumber, longitudinal_wavenumber

LITERAL_UNCERTAINTY_FORM = "dp > hbar/dx ~ hbar*kappa = (k0^2 (n2^2 sin^2(phi) - n1^2))^(1/2)"
DELTA_N_READING = "delta_n = kappa/k0 = sqrt(n2^2 sin^2(phi) - n1^2) (dimensionless)"
DELTA_X_READING = "delta_x = 1/kappa (decay length of exp(-kappa x))"


class Sign(str, enum.Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"


def einstein_check(k: WaveNumber) -> Sign:
    value = k.value if isinstance(k, WaveNumber) else complex(k)
    e2 = (HBAR * abs(value.real) * SPEED_OF_LIGHT) ** 2 - (HBAR * abs(value.imag) * SPEED_OF_LIGHT) ** 2
    if e2 > 0:
        return Sign.POSITIVE
    if e2 < 0:
        return Sign.NEGATIVE
    return Sign.ZERO


@dataclass(frozen=True)
class VirtualityReport:
    k: complex
    kappa: float
    E_squared_sign: Sign
    delta_x: float
    delta_p_bound: float
    delta_n: float
    raised_k: complex
    raised_classification: Classification
    # index at which the gap mode sits exactly at cutoff, sqrt(n1^2 + delta_n^2)
    cutoff_index: float
    literal_form: str = LITERAL_UNCERTAINTY_FORM
    interpretation: str = f"{DELTA_X_READING}; {DELTA_N_READING}"


def uncertainty_report(spec: DoublePrismSpec, omega: float | None = None) -> VirtualityReport:
    omega = spec.omega0 if omega is None else omega
    ctx = spec.context()
    k = longitudinal_wavenumber(Medium(spec.gap_index, "gap"), ctx, omega)
    if not k.is_evanescent:
        raise DomainError(f"gap mode is {k.classification.value}, not evanescent")
    kappa = k.kappa
    k0 = omega / SPEED_OF_LIGHT
    n1, n2 = spec.gap_index, spec.prism_index
    delta_n = math.sqrt(n2**2 * math.sin(spec.incidence_angle) ** 2 - n1**2)
    raised = longitudinal_wavenumber(Medium(n1 + delta_n, "raised gap"), ctx, omega)
    return VirtualityReport(
        k=k.value,
        kappa=kappa,
        E_squared_sign=einstein_check(k),
        delta_x=1.0 / kappa,
        delta_p_bound=HBAR * kappa,
        delta_n=delta_n,
        raised_k=raised.value,
        raised_classification=raised.classification,
        cutoff_index=math.hypot(n1, delta_n),
    )
