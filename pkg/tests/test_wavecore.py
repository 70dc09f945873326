import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evanesim.conventions import SPEED_OF_LIGHT as C
from evanesim.errors import DomainError
from evanesim.wavecore import (
    Classification,
    FrequencyGrid,
    Medium,
    ObliqueContext,
    Polarization,
    QuantumRegion,
    WaveNumber,
    critical_angle,
    longitudinal_wavenumber,
    waveguide_wavenumber,
)

F0 = 9.15e9
W0 = 2 * math.pi * F0
PRISM = Medium(1.6, "perspex")
AIR = Medium(1.0, "air")


def test_air_normal_incidence_is_free_space_wavenumber():
    k = longitudinal_wavenumber(AIR, ObliqueContext(), W0)
    assert k.classification is Classification.PROPAGATING
    assert k.value.imag == 0
    assert k.value.real == pytest.approx(191.77, abs=0.01)
    assert k.value.real == pytest.approx(2 * math.pi * F0 / C, rel=1e-15)


def test_air_gap_behind_prism_at_45_deg_is_evanescent():
    ctx = ObliqueContext(math.pi / 4, Polarization.TM, PRISM)
    k = longitudinal_wavenumber(AIR, ctx, W0)
    assert k.classification is Classification.EVANESCENT
    assert k.value.real == 0
    # kappa = k0 * sqrt(n^2 sin^2(45) - 1) = k0 * sqrt(0.28)
    assert k.kappa == pytest.approx(W0 / C * math.sqrt(1.28 - 1), rel=1e-12)
    assert k.kappa == pytest.approx(101.5, abs=0.05)


@pytest.mark.parametrize("n", [1.0, 1.6, 3.4])
def test_normal_incidence_gives_k0_n(n):
    k = longitudinal_wavenumber(Medium(n), ObliqueContext(0.0, "TE", PRISM), W0)
    assert k.classification is Classification.PROPAGATING
    assert k.value == pytest.approx(W0 / C * n, rel=1e-15)


def test_critical_angle_perspex():
    assert math.degrees(critical_angle(1.6, 1.0)) == pytest.approx(38.68, abs=0.005)


def test_critical_angle_equal_indices_is_grazing():
    assert critical_angle(1.3, 1.3) == pytest.approx(math.pi / 2)


def test_critical_angle_two():
    assert math.degrees(critical_angle(2.0, 1.0)) == pytest.approx(30.0, abs=1e-12)


def test_critical_angle_rejects_rare_to_dense():
    with pytest.raises(DomainError):
        critical_angle(1.0, 1.6)


def test_waveguide_below_cutoff():
    k = waveguide_wavenumber(10e-3, W0)
    assert k.classification is Classification.EVANESCENT
    expected = math.sqrt((math.pi / 10e-3) ** 2 - (W0 / C) ** 2)
    assert k.kappa == pytest.approx(expected, rel=1e-13)
    assert k.kappa == pytest.approx(248.8, abs=0.05)


def test_waveguide_at_cutoff():
    a = 10e-3
    f_c = C / (2 * a)
    k = waveguide_wavenumber(a, 2 * math.pi * f_c)
    assert k.classification is Classification.CUTOFF
    assert k.value == 0


def test_waveguide_above_cutoff():
    k = waveguide_wavenumber(30e-3, W0)
    assert k.classification is Classification.PROPAGATING
    assert C / (2 * 30e-3) == pytest.approx(5.0e9, rel=1e-3)


def test_snell_critical_angle_gives_exact_cutoff():
    theta = critical_angle(1.6, 1.0)
    k = longitudinal_wavenumber(AIR, ObliqueContext(theta, "TE", PRISM), W0)
    assert k.value == 0
    assert k.classification is Classification.CUTOFF


angles = st.floats(0.0, 1.5, allow_nan=False)
indices = st.floats(1.0, 4.0, allow_nan=False)
omegas = st.floats(1e9, 1e12, allow_nan=False)


@given(angles, indices, indices, omegas, st.sampled_from(["TE", "TM"]))
def test_branch_is_purely_real_or_imaginary(theta, n_in, n_out, w, pol):
    k = longitudinal_wavenumber(Medium(n_out), ObliqueContext(theta, pol, Medium(n_in)), w)
    assert k.value.real * k.value.imag == 0
    assert k.value.real >= 0 and k.value.imag >= 0
    if k.classification is Classification.EVANESCENT:
        assert k.value.real == 0 and k.value.imag > 0


@given(angles, indices, omegas)
def test_kx_is_frequency_linear_at_fixed_angle(theta, n, w):
    ctx = ObliqueContext(theta, "TE", Medium(n))
    assert ctx.kx(2 * w) == pytest.approx(2 * ctx.kx(w), rel=1e-15, abs=0)


def test_pinned_kx_is_constant():
    ctx = ObliqueContext(0.5, "TE", PRISM, reference_omega=W0)
    w = np.linspace(0.9, 1.1, 5) * W0
    assert np.all(ctx.kx(w) == ctx.kx(W0))


def test_kz_magnitude_continuous_across_critical_angle():
    theta_c = critical_angle(1.6, 1.0)
    thetas = np.linspace(theta_c - 0.05, theta_c + 0.05, 2001)
    mags = np.array([abs(AIR.kz(W0, ObliqueContext(t, "TE", PRISM))) for t in thetas])
    # sqrt-type behaviour near zero: the largest jump is bounded by sqrt of the step scale
    step = thetas[1] - thetas[0]
    k0 = W0 / C
    bound = k0 * math.sqrt(2 * 1.6**2 * math.sin(theta_c) * math.cos(theta_c) * step) * 1.01
    assert np.max(np.abs(np.diff(mags))) <= bound


def test_quantum_region_branch():
    assert QuantumRegion(1.0).kz(0.5) == pytest.approx(1j)
    assert QuantumRegion(0.0).kz(0.5) == pytest.approx(1.0)


def test_frequency_grid_validation():
    FrequencyGrid(np.linspace(1, 2, 5), 0.2)
    with pytest.raises(ValueError):
        FrequencyGrid(np.array([1.0, 1.0, 2.0]), 1.0)
    with pytest.raises(ValueError):
        FrequencyGrid(np.array([1.0, 2.0, 4.0]), 1.0)


def test_wavenumber_of_zero_is_cutoff():
    assert WaveNumber.of(0).classification is Classification.CUTOFF


def test_medium_rejects_nonpositive_index():
    with pytest.raises(ValueError):
        Medium(0.0)
