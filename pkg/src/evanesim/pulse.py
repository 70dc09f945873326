"""Time-domain pulses through scattering spectra, with arrival-time estimators.

Signals are synthesized on a uniform time axis; the analytic signal is built
from the one-sided FFT spectrum, so envelopes come from the same spectral
data that the channel multiplies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import GridError
from .wavecore import FrequencyGrid
from .xfermat import ScatterSpectrum

ENVELOPES = ("gaussian", "raised_cosine")
COVERAGE_FLOOR = 1e-2  # 40 dB in amplitude
SIGNALS = ("incident", "reflected", "transmitted")


@dataclass(frozen=True)
class PulseSpec:
    carrier: float = 9.15e9
    envelope: str = "gaussian"
    envelope_duration: float = 2e-9  # FWHM of the envelope amplitude
    sample_rate: float = 100e9
    record_length: float = 20e-9

    def __post_init__(self):
        if self.envelope not in ENVELOPES:
            raise ValueError(f"envelope must be one of {ENVELOPES}, got {self.envelope!r}")
        if not (self.carrier > 0 and self.envelope_duration > 0):
            raise ValueError("carrier and envelope duration must be positive")
        if not self.sample_rate > 8 * self.carrier:
            raise ValueError("sample_rate must exceed 8x the carrier")
        if not self.record_length > 8 * self.envelope_duration:
            raise ValueError("record_length must exceed 8x the envelope duration")
        if self.fractional_bandwidth > 0.2:
            raise ValueError(f"fractional bandwidth {self.fractional_bandwidth:.3f} exceeds 0.2")

    @property
    def fractional_bandwidth(self) -> float:
        """Full width at half maximum of the spectral amplitude over the carrier."""
        if self.envelope == "gaussian":
            width = 4 * math.log(2) / (math.pi * self.envelope_duration)
        else:
            # cos^2 window of total support 2*FWHM: half-amplitude width 1/FWHM
            width = 1.0 / self.envelope_duration
        return width / self.carrier

    @property
    def samples(self) -> int:
        return int(round(self.record_length * self.sample_rate))

    @property
    def center_time(self) -> float:
        return self.record_length / 4


def envelope_shape(spec: PulseSpec, t: np.ndarray) -> np.ndarray:
    x = t - spec.center_time
    T = spec.envelope_duration
    if spec.envelope == "gaussian":
        return np.exp(-4 * math.log(2) * (x / T) ** 2)
    inside = np.abs(x) < T
    return np.where(inside, np.cos(0.5 * math.pi * x / T) ** 2, 0.0)


@dataclass(frozen=True)
class Arrival:
    peak: float
    centroid: float
    half_max_front: float

    def shifted(self, other: "Arrival") -> "Arrival":
        return Arrival(self.peak - other.peak, self.centroid - other.centroid,
                       self.half_max_front - other.half_max_front)


@dataclass(frozen=True)
class PulseTrace:
    """Sampled signals on a common time axis.

    ``spectra`` holds the one-sided FFT coefficients (numpy sign convention)
    each real signal was synthesized from.
    """

    spec: PulseSpec
    time_axis: np.ndarray
    incident: np.ndarray
    reflected: Optional[np.ndarray] = None
    transmitted: Optional[np.ndarray] = None
    arrival: dict = field(default_factory=dict)
    spectra: dict = field(default_factory=dict, repr=False)

    @property
    def dt(self) -> float:
        return 1.0 / self.spec.sample_rate

    @property
    def fft_frequencies(self) -> np.ndarray:
        return np.fft.rfftfreq(self.time_axis.size, self.dt)

    def analytic(self, name: str) -> np.ndarray:
        return _analytic_from_rfft(self.spectra[name], self.time_axis.size)

    def envelope(self, name: str) -> np.ndarray:
        return np.abs(self.analytic(name))

    def energy(self, name: str) -> float:
        return float(np.sum(getattr(self, name) ** 2) * self.dt)


def _analytic_from_rfft(coeffs: np.ndarray, n: int) -> np.ndarray:
    full = np.zeros(n, dtype=complex)
    half = coeffs.size
    full[:half] = coeffs
    full[1:half] *= 2
    if n % 2 == 0:
        full[half - 1] = coeffs[-1]  # Nyquist bin is not doubled
    return np.fft.ifft(full)


def synthesize(spec: PulseSpec) -> PulseTrace:
    """Carrier times envelope, unit peak amplitude, centred at a quarter record."""
    t = np.arange(spec.samples) / spec.sample_rate
    signal = envelope_shape(spec, t) * np.cos(2 * math.pi * spec.carrier * (t - spec.center_time))
    coeffs = np.fft.rfft(signal)
    trace = PulseTrace(spec, t, signal, spectra={"incident": coeffs})
    return replace(trace, arrival={"incident": arrival_times(trace, "incident")})


def channel_grid(trace: PulseTrace, floor: float = 1e-9) -> FrequencyGrid:
    """FFT bins of the incident pulse whose amplitude exceeds ``floor`` of the peak.

    Evaluating a spectrum on this grid lets :func:`apply_channel` use it
    without interpolation.
    """
    mag = np.abs(trace.spectra["incident"])
    idx = np.nonzero(mag >= floor * mag.max())[0]
    idx = np.arange(max(idx[0], 1), idx[-1] + 1)
    w = 2 * math.pi * trace.fft_frequencies[idx]
    return FrequencyGrid(w, trace.spec.carrier)


def _response_on_bins(spectrum: ScatterSpectrum, channel: str, freqs: np.ndarray, needed: np.ndarray):
    w_bins = 2 * math.pi * freqs
    w = spectrum.omega
    lo, hi = w[0], w[-1]
    span = hi - lo
    tol = 1e-9 * max(hi, 1.0)
    covered = (w_bins >= lo - tol) & (w_bins <= hi + tol)
    if np.any(needed & ~covered):
        raise GridError("scatter spectrum does not cover the pulse's 40 dB bandwidth")
    values = spectrum.t if channel == "transmission" else spectrum.r
    phase = spectrum.phase_t if channel == "transmission" else spectrum.phase_r
    h = np.zeros(freqs.size, dtype=complex)
    sel = np.nonzero(covered)[0]
    if w.size > 1:
        pos = (w_bins[sel] - lo) / span * (w.size - 1)
        on_grid = np.abs(pos - np.round(pos)) < 1e-6
    else:
        pos = np.zeros(sel.size)
        on_grid = np.ones(sel.size, dtype=bool)
    if np.all(on_grid):
        h[sel] = values[np.round(pos).astype(int)]
    else:
        mag = np.interp(w_bins[sel], w, np.abs(values))
        ph = np.interp(w_bins[sel], w, phase)
        h[sel] = mag * np.exp(1j * ph)
    return h


def apply_channel(incident: PulseTrace, spectrum: ScatterSpectrum, channel: str) -> PulseTrace:
    """Filter the incident pulse by ``r`` or ``t`` and return the trace with that signal filled in."""
    if channel not in ("transmission", "reflection"):
        raise ValueError(f"unknown channel {channel!r}")
    coeffs_in = incident.spectra["incident"]
    mag = np.abs(coeffs_in)
    needed = mag >= COVERAGE_FLOOR * mag.max()
    h = _response_on_bins(spectrum, channel, incident.fft_frequencies, needed)
    # numpy bins carry exp(+i w t); physics amplitudes carry exp(-i w t)
    coeffs = coeffs_in * np.conj(h)
    signal = np.fft.irfft(coeffs, n=incident.time_axis.size)
    name = "transmitted" if channel == "transmission" else "reflected"
    spectra = dict(incident.spectra)
    spectra[name] = coeffs
    trace = replace(incident, spectra=spectra, **{name: signal})
    arrival = dict(incident.arrival)
    arrival[name] = arrival_times(trace, name)
    return replace(trace, arrival=arrival)


def propagate(incident: PulseTrace, spectrum: ScatterSpectrum) -> PulseTrace:
    """Both reflected and transmitted signals."""
    return apply_channel(apply_channel(incident, spectrum, "reflection"), spectrum, "transmission")


def _refine_peak(trace: PulseTrace, name: str, i_peak: int) -> float:
    coeffs = trace.spectra[name]
    n = trace.time_axis.size
    nz = np.nonzero(coeffs)[0]
    nz = nz[nz > 0]
    c = coeffs[nz] * (2.0 / n)
    f = trace.fft_frequencies[nz]

    def neg_env(t):
        return -abs(np.sum(c * np.exp(2j * math.pi * f * t)))

    dt = trace.dt
    t0 = trace.time_axis[i_peak]
    res = minimize_scalar(neg_env, bounds=(t0 - dt, t0 + dt), method="bounded",
                          options={"xatol": 1e-6 * dt})
    return float(res.x)


def arrival_times(trace: PulseTrace, name: str) -> Arrival:
    """Envelope peak, energy centroid and half-maximum front of one signal."""
    env = trace.envelope(name)
    if not np.any(env > 0) or not np.any(getattr(trace, name)):
        raise ValueError(f"{name} signal is identically zero")
    t = trace.time_axis
    i_peak = int(np.argmax(env))
    peak = _refine_peak(trace, name, i_peak)
    power = env**2
    centroid = float(np.sum(t * power) / np.sum(power))
    half = 0.5 * env[i_peak]
    i = int(np.argmax(env >= half))
    if i == 0:
        front = float(t[0])
    else:
        frac = (half - env[i - 1]) / (env[i] - env[i - 1])
        front = float(t[i - 1] + frac * (t[i] - t[i - 1]))
    return Arrival(peak, centroid, front)
