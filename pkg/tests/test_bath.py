import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from kerrqc.bath import (
    BathSpectrum,
    VacuumKind,
    detailed_balance_ratio,
    dissipation_coeffs,
    wightman_fourier,
)
from kerrqc.errors import DomainError


def G_mp(w, k):
    mp.mp.dps = 40
    w, k = mp.mpf(w), mp.mpf(k)
    return w / (2 * mp.pi) / (1 - mp.exp(-2 * mp.pi * w / k))


def test_zero_frequency_limit():
    assert wightman_fourier(BathSpectrum.unruh(0.25), 0.0) == pytest.approx(
        0.006332573977646111, rel=1e-14
    )


def test_reference_value():
    assert wightman_fourier(BathSpectrum.unruh(0.251247), 0.1) == pytest.approx(
        0.017337505143621728, rel=1e-14
    )


@pytest.mark.parametrize("w", [-3.0, -0.1, -1e-6, 1e-6, 0.1, 2.0])
@pytest.mark.parametrize("k", [0.01, 0.25, 5.0])
def test_against_high_precision(w, k):
    expected = float(G_mp(w, k))
    assert wightman_fourier(BathSpectrum.unruh(k), w) == pytest.approx(expected, rel=1e-13)


@given(st.floats(-10, 10))
def test_boulware_vanishes(w):
    assert wightman_fourier(BathSpectrum(VacuumKind.BOULWARE), w) == 0.0


@given(st.floats(-5, 5), st.floats(1e-3, 10))
def test_non_negative(w, k):
    assert wightman_fourier(BathSpectrum.unruh(k), w) >= 0


def test_zero_temperature_limits():
    b = BathSpectrum.unruh(0.0)
    assert b(0.3) == pytest.approx(0.3 / (2 * math.pi))
    assert b(-0.3) == 0.0 and b(0.0) == 0.0


@pytest.mark.parametrize("k", [0.05, 0.5, 5.0])
def test_continuity_at_zero(k):
    b = BathSpectrum.unruh(k)
    for w in (1e-8, -1e-8):
        assert abs(b(w) - k / (4 * math.pi**2)) < 1e-9


def test_kms_ratio():
    for w in np.linspace(0.01, 1, 10):
        for k in np.linspace(0.05, 5, 10):
            b = BathSpectrum.unruh(k)
            assert b(w) / b(-w) == pytest.approx(math.exp(2 * math.pi * w / k), rel=1e-12)


def test_R_two_ways():
    b = BathSpectrum.unruh(0.251247)
    c = dissipation_coeffs(b, 0.1, 0.01)
    assert c.R == pytest.approx(0.8483957863203131, rel=1e-13)
    assert c.R == pytest.approx((b(0.1) - b(-0.1)) / (b(0.1) + b(-0.1)), rel=1e-12)
    assert c.B / c.A == pytest.approx(c.R, rel=1e-12)


def test_R_zero_temperature():
    assert detailed_balance_ratio(BathSpectrum.unruh(1e-6), 0.1) == 1.0
    assert detailed_balance_ratio(BathSpectrum.unruh(0.0), 0.1) == 1.0


@given(st.floats(1e-3, 2), st.floats(1e-2, 5), st.floats(1e-3, 1))
def test_coefficient_invariants(w, k, mu):
    b = BathSpectrum.unruh(k)
    c = dissipation_coeffs(b, w, mu)
    assert c.A >= abs(c.B)
    assert abs(c.R) <= 1
    assert c.C == b(0.0) - c.A
    assert c.gamma_minus >= c.gamma_plus >= 0
    assert c.gamma_plus / c.gamma_minus == pytest.approx(math.exp(-2 * math.pi * w / k), rel=1e-10)


def test_boulware_has_no_dissipation():
    with pytest.raises(DomainError, match="no dissipation"):
        dissipation_coeffs(BathSpectrum(VacuumKind.BOULWARE), 0.1, 0.01)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        BathSpectrum.unruh(-1.0)
    with pytest.raises(DomainError):
        dissipation_coeffs(BathSpectrum.unruh(1.0), 0.0, 0.01)
