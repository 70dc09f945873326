import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evanesim.conventions import SPEED_OF_LIGHT as C
from evanesim.errors import DomainError, ResonanceError
from evanesim.scenarios import DoublePrismSpec, double_prism
from evanesim.wavecore import (
    Medium,
    ObliqueContext,
    Polarization,
    WaveNumber,
    longitudinal_wavenumber,
)
from evanesim.xfermat import (
    Layer,
    Stack,
    TransferMatrix,
    airy_series_oracle,
    interface_matrix,
    power_balance,
    propagation_matrix,
    scatter,
    scattering_from_matrix,
    stack_matrix,
)

W0 = 2 * math.pi * 9.15e9
PRISM = Medium(1.6, "prism")
AIR = Medium(1.0, "air")
SETUP = DoublePrismSpec()


def _matrix_close(m, ref, tol=1e-14):
    np.testing.assert_allclose(m.as_array(), ref, atol=tol, rtol=0)


def test_interface_identical_media_is_identity():
    k = WaveNumber.of(191.77)
    _matrix_close(interface_matrix(k, k), np.eye(2))


def test_interface_tir_has_unit_reflection():
    ctx = SETUP.context()
    k1 = longitudinal_wavenumber(PRISM, ctx, W0)
    k2 = longitudinal_wavenumber(AIR, ctx, W0)
    m = interface_matrix(k1, k2, Polarization.TM, (PRISM, AIR), W0)
    r, _ = scattering_from_matrix(m)
    assert abs(r) == pytest.approx(1.0, abs=1e-14)


def test_interface_fresnel_normal_incidence():
    k0 = W0 / C
    m = interface_matrix(WaveNumber.of(k0), WaveNumber.of(1.5 * k0))
    r, t = scattering_from_matrix(m)
    # (n1 - n2)/(n1 + n2), 2 n1/(n1 + n2)
    assert r == pytest.approx(-0.2, abs=1e-15)
    assert t == pytest.approx(0.8, abs=1e-15)


def test_interface_rejects_double_cutoff():
    with pytest.raises(DomainError):
        interface_matrix(WaveNumber.of(0), WaveNumber.of(0))


def test_propagation_zero_thickness_is_identity():
    _matrix_close(propagation_matrix(WaveNumber.of(123.0), 0.0), np.eye(2))


def test_propagation_evanescent_is_real_with_zero_phase():
    m = propagation_matrix(WaveNumber.of(101.5j), 32.8e-3)
    assert m.m11.imag == 0 and m.m22.imag == 0
    assert np.angle(m.m11) == 0 and np.angle(m.m22) == 0
    assert m.m11.real == pytest.approx(math.exp(-3.3292), rel=1e-4)
    assert m.m22.real == pytest.approx(math.exp(3.3292), rel=1e-4)


def test_propagation_real_kz_unit_modulus():
    m = propagation_matrix(WaveNumber.of(100.0), 0.01)
    assert abs(m.m11) == pytest.approx(1.0, abs=1e-15)
    assert np.angle(m.m11) == pytest.approx(1.0, abs=1e-15)
    assert np.angle(m.m22) == pytest.approx(-1.0, abs=1e-15)


def test_empty_stack_identity():
    m = stack_matrix(Stack(AIR, (), AIR), W0)
    _matrix_close(m, np.eye(2))


def test_single_gap_composition():
    stack = double_prism(SETUP)
    ctx = stack.ctx
    k1 = longitudinal_wavenumber(PRISM, ctx, W0)
    k2 = longitudinal_wavenumber(AIR, ctx, W0)
    pol, d = Polarization.TM, SETUP.gap
    manual = (
        interface_matrix(k2, k1, pol, (AIR, PRISM), W0)
        @ propagation_matrix(k2, d)
        @ interface_matrix(k1, k2, pol, (PRISM, AIR), W0)
    )
    np.testing.assert_allclose(stack_matrix(stack, W0).as_array(), manual.as_array(), rtol=1e-14)


def test_identity_matrix_scattering():
    r, t = scattering_from_matrix(TransferMatrix.identity())
    assert r == 0 and t == 1


def test_resonance_signalled():
    with pytest.raises(ResonanceError):
        scattering_from_matrix(TransferMatrix(1, 1, 1, 0))


def test_opaque_gap_limit():
    r, t = scatter(double_prism(SETUP.with_gap(0.3)), W0)  # kappa*d ~ 30
    assert abs(t) < 1e-12
    assert abs(r) == pytest.approx(1.0, abs=1e-12)


def test_reference_ftir_matches_airy_at_one_wavelength():
    stack = double_prism(SETUP)
    r, t = scatter(stack, W0)
    r60, t60 = airy_series_oracle(stack, W0, terms=60)
    assert abs(t - t60) < 1e-12 and abs(r - r60) < 1e-12


def test_airy_first_term_is_single_pass():
    stack = double_prism(SETUP)
    q1 = complex(stack.admittance(PRISM, W0))
    q2 = complex(stack.admittance(AIR, W0))
    kappa = complex(AIR.kz(W0, stack.ctx)).imag
    single = (2 * q1 / (q1 + q2)) * (2 * q2 / (q2 + q1)) * math.exp(-kappa * SETUP.gap)
    _, t1 = airy_series_oracle(stack, W0, terms=1)
    assert t1 == pytest.approx(single, rel=1e-14)


def test_airy_gap_closure():
    stack = double_prism(SETUP.with_gap(0.0))
    r, t = airy_series_oracle(stack, W0)
    assert abs(t - 1) < 1e-12 and abs(r) < 1e-12
    r, t = scatter(stack, W0)
    assert abs(t - 1) < 1e-12 and abs(r) < 1e-12


def test_airy_rejects_multilayer():
    stack = Stack(AIR, (Layer(0.01, PRISM), Layer(0.01, AIR)), AIR)
    with pytest.raises(ValueError):
        airy_series_oracle(stack, W0)


def test_evanescent_propagation_phase_is_zero():
    kz = AIR.kz(W0, SETUP.context())
    m = propagation_matrix(kz, 0.05)
    assert np.angle(m.m11) == 0.0


def test_semi_infinite_barrier_reflects_totally():
    stack = Stack(PRISM, (), AIR, SETUP.context())
    assert power_balance(stack, W0) == pytest.approx(1.0, abs=1e-14)
    r, _ = scatter(stack, W0)
    assert abs(r) == pytest.approx(1.0, abs=1e-14)


# random lossless stacks -------------------------------------------------

media = st.floats(1.0, 3.5).map(Medium)
layer = st.tuples(st.floats(0.0, 0.03), media).map(lambda x: Layer(*x))


@st.composite
def stacks(draw, max_layers=4):
    entry = draw(media)
    theta = draw(st.floats(0.0, 1.4))
    pol = draw(st.sampled_from(["TE", "TM"]))
    ctx = ObliqueContext(theta, pol, entry)
    layers = draw(st.lists(layer, max_size=max_layers))
    exit_ = draw(media)
    return Stack(entry, tuple(layers), exit_, ctx)


freqs = st.floats(2 * math.pi * 1e9, 2 * math.pi * 2e10)


@settings(max_examples=300, deadline=None)
@given(stacks(), freqs)
def test_unitarity(stack, w):
    try:
        balance = power_balance(stack, w)
    except (ResonanceError, DomainError):
        return
    assert balance == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(stacks(), freqs)
def test_determinant_equals_admittance_ratio(stack, w):
    # amplitude-basis det is q_entry/q_exit; 1 whenever entry and exit agree
    try:
        m = stack_matrix(stack, w)
    except DomainError:
        return
    ratio = complex(stack.admittance(stack.entry_medium, w) / stack.admittance(stack.exit_medium, w))
    assert complex(m.det) == pytest.approx(ratio, rel=1e-12)
    if stack.exit_medium == stack.entry_medium:
        assert abs(m.det - 1) < 1e-12


@settings(max_examples=200, deadline=None)
@given(stacks(), freqs)
def test_reciprocity_of_transmission(stack, w):
    try:
        _, t_fwd = scatter(stack, w)
        _, t_bwd = scatter(stack.reversed(), w)
    except DomainError:
        return
    qa = complex(stack.admittance(stack.entry_medium, w))
    qb = complex(stack.admittance(stack.exit_medium, w))
    if qb.real == 0:
        return
    # flux-normalised amplitudes agree in both directions
    assert abs(t_fwd) ** 2 * qb.real / qa.real == pytest.approx(abs(t_bwd) ** 2 * qa.real / qb.real, rel=1e-9, abs=1e-14)


@st.composite
def single_gaps(draw):
    entry = draw(media)
    theta = draw(st.floats(0.0, 1.4))
    ctx = ObliqueContext(theta, draw(st.sampled_from(["TE", "TM"])), entry)
    return Stack(entry, (Layer(draw(st.floats(0.0, 0.05)), draw(media)),), draw(media), ctx)


@settings(max_examples=300, deadline=None)
@given(single_gaps(), freqs)
def test_matrix_matches_airy(stack, w):
    try:
        r, t = scatter(stack, w)
    except DomainError:
        return
    ra, ta = airy_series_oracle(stack, w)
    assert abs(r - ra) < 1e-12 and abs(t - ta) < 1e-12


def test_vectorized_matches_scalar():
    stack = double_prism(SETUP)
    w = np.linspace(0.95, 1.05, 7) * W0
    r, t = scatter(stack, w)
    for i, wi in enumerate(w):
        ri, ti = scatter(stack, wi)
        assert r[i] == pytest.approx(ri, rel=1e-14)
        assert t[i] == pytest.approx(ti, rel=1e-14)
