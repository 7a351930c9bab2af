"""Constants against scipy.constants, plus the field-unit conversions."""

import math

import pytest
from scipy import constants as sc

from magqsl.constants import (
    B_CR_GAUSS,
    C_CM_S,
    C_PM_S,
    E_ESU,
    HBAR_ERG_S,
    LAMBDA_E_PM,
    MEC2_ERG,
    FieldProfile,
    energy_erg,
    epsilon_of_alpha,
    from_beta,
    to_beta,
    velocity_to_c_units,
)

# scipy may carry a newer CODATA adjustment than the pinned literals;
# successive adjustments move these constants at the 1e-9 level.
CODATA_RTOL = 1e-8


def test_speed_of_light_is_exact():
    assert C_CM_S == sc.c * 100.0
    assert C_PM_S == sc.c * 1e12


def test_hbar_matches_scipy():
    assert HBAR_ERG_S == pytest.approx(sc.hbar * 1e7, rel=CODATA_RTOL)


def test_electron_rest_energy_matches_scipy():
    assert MEC2_ERG == pytest.approx(sc.m_e * sc.c**2 * 1e7, rel=CODATA_RTOL)


def test_esu_charge_matches_scipy():
    # e[esu] = e[C] * c[cm/s] / 10, from 1 C = c/10 statcoulomb.
    assert E_ESU == pytest.approx(sc.e * sc.c * 10.0, rel=CODATA_RTOL)


def test_compton_length_value():
    assert LAMBDA_E_PM == pytest.approx(
        sc.hbar / (sc.m_e * sc.c) * 1e12, rel=CODATA_RTOL
    )
    assert LAMBDA_E_PM == pytest.approx(0.3861592680, rel=1e-9)


def test_critical_field_value():
    assert B_CR_GAUSS == pytest.approx(4.4140052e13, rel=1e-7)
    assert B_CR_GAUSS == MEC2_ERG**2 / (HBAR_ERG_S * C_CM_S * E_ESU)


def test_field_profile_validation():
    with pytest.raises(ValueError, match="field coefficient must be positive"):
        FieldProfile(b0=0.0, n=1.0)
    with pytest.raises(ValueError, match="profile exponent must satisfy n > -1"):
        FieldProfile(b0=1.0, n=-1.0)
    profile = FieldProfile(b0=2.5, n=-0.5)
    assert profile.b0 == 2.5 and profile.n == -0.5


def test_beta_roundtrip():
    profile = from_beta(0.37, 1.5)
    assert profile.n == 1.5
    assert to_beta(profile) == pytest.approx(0.37, rel=1e-12)


def test_beta_of_critical_uniform_field_is_one():
    assert to_beta(FieldProfile(b0=B_CR_GAUSS, n=0.0)) == pytest.approx(1.0, rel=1e-15)


def test_from_beta_rejects_nonpositive():
    with pytest.raises(ValueError):
        from_beta(0.0, 1.0)
    with pytest.raises(ValueError):
        from_beta(-2.0, 1.0)


def test_epsilon_of_alpha():
    assert epsilon_of_alpha(0.0) == 1.0
    assert epsilon_of_alpha(3.0) == pytest.approx(2.0, rel=1e-15)
    assert epsilon_of_alpha(-1.0) == 0.0
    with pytest.raises(ValueError, match="has no real energy"):
        epsilon_of_alpha(-1.0000001)


def test_energy_erg_at_rest():
    assert energy_erg(0.0) == MEC2_ERG
    assert energy_erg(8.0) == pytest.approx(3.0 * MEC2_ERG, rel=1e-15)


def test_velocity_to_c_units():
    assert velocity_to_c_units(math.pi, 0.5) == pytest.approx(0.5, rel=1e-15)
