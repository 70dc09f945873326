import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from evanesim.conventions import HBAR, SPEED_OF_LIGHT as C
from evanesim.errors import DomainError
from evanesim.scenarios import DoublePrismSpec
from evanesim.virtuality import Sign, einstein_check, uncertainty_report
from evanesim.wavecore import Classification, Medium, ObliqueContext, WaveNumber, longitudinal_wavenumber

SETUP = DoublePrismSpec()
K0 = 2 * math.pi * 9.15e9 / C


def test_einstein_examples():
    assert einstein_check(WaveNumber.of(191.77)) is Sign.POSITIVE
    assert einstein_check(WaveNumber.of(101.5j)) is Sign.NEGATIVE
    assert einstein_check(WaveNumber.of(0)) is Sign.ZERO


def test_reference_report():
    rep = uncertainty_report(SETUP)
    assert rep.kappa == pytest.approx(101.5, abs=0.1)
    assert rep.delta_x == pytest.approx(9.85e-3, abs=0.01e-3)
    assert rep.delta_n == pytest.approx(0.5292, abs=0.0005)
    assert rep.delta_n == pytest.approx(math.sqrt(1.28 - 1), rel=1e-12)
    assert rep.E_squared_sign is Sign.NEGATIVE
    assert rep.raised_classification is Classification.PROPAGATING
    assert abs(rep.raised_k.imag) < 1e-9 * K0


def test_cutoff_index_sits_at_cutoff():
    rep = uncertainty_report(SETUP)
    k = longitudinal_wavenumber(Medium(rep.cutoff_index), SETUP.context(), SETUP.omega0)
    assert abs(k.value) < 1e-6 * K0


def test_uncertainty_product_is_hbar():
    rep = uncertainty_report(SETUP)
    assert rep.delta_p_bound * rep.delta_x == pytest.approx(HBAR, rel=1e-14)


def test_literal_form_recorded():
    rep = uncertainty_report(SETUP)
    assert "k0^2" in rep.literal_form
    assert "1/kappa" in rep.interpretation


def test_rejects_critical_and_below():
    with pytest.raises(DomainError):
        uncertainty_report(DoublePrismSpec(incidence_angle=SETUP.critical_angle))
    with pytest.raises(DomainError):
        uncertainty_report(DoublePrismSpec(incidence_angle=math.radians(30)))


@given(st.floats(1.2, 3.0), st.floats(0.01, 1.0))
def test_raise_to_allowed(n2, margin):
    theta_c = math.asin(1 / n2)
    theta = theta_c + margin * (math.pi / 2 - theta_c) * 0.999
    spec = DoublePrismSpec(prism_index=n2, incidence_angle=theta)
    if not spec.gap_kz().imag > 0:
        return
    rep = uncertainty_report(spec)
    assert rep.delta_n >= 0
    assert abs(rep.raised_k.imag) < 1e-9 * spec.omega0 / C
    assert rep.raised_classification in (Classification.PROPAGATING, Classification.CUTOFF)


def test_einstein_agrees_with_classification():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n_in, n_out = rng.uniform(1.0, 3.0, 2)
        ctx = ObliqueContext(rng.uniform(0, 1.55), rng.choice(["TE", "TM"]), Medium(n_in))
        k = longitudinal_wavenumber(Medium(n_out), ctx, rng.uniform(1e9, 1e11))
        negative = einstein_check(k) is Sign.NEGATIVE
        assert negative == (k.classification is Classification.EVANESCENT)
