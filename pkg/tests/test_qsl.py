"""QSL times, displacement, velocity sweeps, and the saturation limit."""

import math

import numpy as np
import pytest

from magqsl.constants import (
    B_CR_GAUSS,
    HBAR_ERG_S,
    LAMBDA_E_PM,
    MEC2_ERG,
    FieldProfile,
    from_beta,
)
from magqsl.qsl import (
    ML,
    MT,
    delta_h,
    mean_energy,
    pair_epsilons,
    qsl_velocity,
    sqsl,
    sweep_b0,
    sweep_n,
    tau_qsl,
)

UNIFORM_CRITICAL = from_beta(1.0, 0.0)


def test_delta_h_values():
    assert delta_h(1.0, 3.0) == 1.0
    assert delta_h(MEC2_ERG, math.sqrt(3.0) * MEC2_ERG) == pytest.approx(
        0.3660254 * MEC2_ERG, rel=1e-6
    )


def test_delta_h_rejects_bad_pairs():
    with pytest.raises(ValueError, match="need e_high > e_low > 0"):
        delta_h(3.0, 1.0)
    with pytest.raises(ValueError, match="need e_high > e_low > 0"):
        delta_h(0.0, 1.0)
    with pytest.raises(ValueError, match="need e_high > e_low > 0"):
        delta_h(2.0, 2.0)


def test_mean_energy():
    assert mean_energy(1.0, 3.0) == 2.0


def test_tau_qsl_mt_normalization():
    # dH = pi hbar / 2 makes the MT time exactly one second.
    tau, label = tau_qsl(0.5 * math.pi * HBAR_ERG_S, 1.5 * math.pi * HBAR_ERG_S)
    assert tau == pytest.approx(1.0, rel=1e-12)
    assert label == MT


def test_tau_qsl_ml_branch_with_synthetic_energies():
    # Mean below spread only happens for partly negative spectra, which
    # this problem never produces, but the max logic must still work.
    tau, label = tau_qsl(-0.6, 1.0)
    assert label == ML
    assert tau == pytest.approx(0.5 * math.pi * HBAR_ERG_S / 0.2, rel=1e-12)


def test_tau_qsl_level_pair_value():
    tau, label = tau_qsl(MEC2_ERG, math.sqrt(3.0) * MEC2_ERG)
    assert label == MT
    assert tau == pytest.approx(
        math.pi * HBAR_ERG_S / ((math.sqrt(3.0) - 1.0) * MEC2_ERG), rel=1e-12
    )
    assert tau == pytest.approx(5.527827e-21, rel=1e-6)


def test_tau_qsl_rejects_degenerate_or_negative_mean():
    with pytest.raises(ValueError, match="need e_high > e_low"):
        tau_qsl(2.0, 2.0)
    with pytest.raises(ValueError, match="mean energy must be positive"):
        tau_qsl(-3.0, -1.0)


def test_pair_epsilons_at_critical_uniform_field():
    eps_lo, eps_hi, d_eps = pair_epsilons(UNIFORM_CRITICAL, "down")
    assert eps_lo == pytest.approx(1.0, rel=1e-9)
    assert eps_hi == pytest.approx(math.sqrt(3.0), rel=1e-9)
    assert d_eps == pytest.approx(math.sqrt(3.0) - 1.0, rel=1e-9)
    assert d_eps == pytest.approx(eps_hi - eps_lo, rel=1e-12)


def test_qsl_point_invariants():
    point = qsl_velocity(UNIFORM_CRITICAL, "up")
    assert 0.0 < point.v_over_c < 1.0
    assert point.bound_used == MT
    assert point.spin == "up"
    assert point.nu == 0
    assert point.beta == pytest.approx(1.0, rel=1e-12)
    _, _, d_eps = pair_epsilons(UNIFORM_CRITICAL, "up")
    assert point.tau_qsl_s * d_eps * MEC2_ERG == pytest.approx(
        math.pi * HBAR_ERG_S, rel=1e-10
    )


def test_uniform_lab_displacement_closed_form():
    # rho = sqrt(2 pi)/2 * sqrt(B_cr/B0) * lambda_e for the uniform
    # ground pair, from the oscillator overlap integral.
    down = qsl_velocity(FieldProfile(b0=10.0, n=0.0), "down")
    expected = (
        0.5 * math.sqrt(2.0 * math.pi) * math.sqrt(B_CR_GAUSS / 10.0) * LAMBDA_E_PM
    )
    assert down.rho_disp_pm == pytest.approx(expected, rel=1e-6)
    up = qsl_velocity(FieldProfile(b0=10.0, n=0.0), "up")
    assert up.rho_disp_pm == pytest.approx(down.rho_disp_pm, rel=1e-9)


def test_sweep_b0_monotone_in_field():
    grid = list(np.geomspace(1e8, 1e12, 5))
    points = sweep_b0(0.0, "up", 0, grid)
    velocities = [p.v_over_c for p in points]
    taus = [p.tau_qsl_s for p in points]
    assert all(b > a for a, b in zip(velocities, velocities[1:]))
    assert all(b < a for a, b in zip(taus, taus[1:]))
    assert [p.profile.b0 for p in points] == grid


def test_sweep_b0_rejects_empty_grid():
    with pytest.raises(ValueError, match="grid must be non-empty"):
        sweep_b0(0.0, "up", 0, [])
    with pytest.raises(ValueError, match="grid must be non-empty"):
        sweep_n([], "up")


def test_up_branch_high_field_tail_is_flat():
    # Above beta = 1e4 the generic branch has saturated: the residual
    # fall-off is 1/(2 t sqrt(a0 a1)), under 0.1% per decade here.
    low = qsl_velocity(from_beta(1e4, 2.0), "up")
    high = qsl_velocity(from_beta(1e5, 2.0), "up")
    assert abs(high.v_over_c - low.v_over_c) / low.v_over_c < 1e-3


def test_sweep_n_matches_sweep_b0_at_shared_point():
    from_n_sweep = sweep_n([0.0], "down")[0]
    from_b0_sweep = sweep_b0(0.0, "down", 0, [1e17])[0]
    assert from_n_sweep.v_over_c == from_b0_sweep.v_over_c
    assert from_n_sweep.tau_qsl_s == from_b0_sweep.tau_qsl_s


def test_sqsl_closed_forms_for_uniform_field():
    assert sqsl(0.0, "up") == pytest.approx(
        (2.0 - math.sqrt(2.0)) / math.sqrt(2.0 * math.pi), rel=1e-6
    )
    assert sqsl(0.0, "down") == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-6)


def test_sqsl_is_the_high_field_limit():
    limit = sqsl(1.0, "down")
    near = qsl_velocity(from_beta(1e10, 1.0), "down")
    assert near.v_over_c == pytest.approx(limit, rel=5e-4)
    assert near.v_over_c < limit


def test_zeeman_off_branch_is_spin_blind():
    a = qsl_velocity(UNIFORM_CRITICAL, "up", zeeman_enabled=False)
    b = qsl_velocity(UNIFORM_CRITICAL, "down", zeeman_enabled=False)
    assert a.spin == "off"
    assert a.v_over_c == b.v_over_c


def test_unknown_spin_label_rejected():
    with pytest.raises(ValueError, match="spin label"):
        qsl_velocity(UNIFORM_CRITICAL, "sideways")
