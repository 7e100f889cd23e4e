"""Rotor aerodynamics against an independent momentum-theory oracle.

The oracle solves the quartic form of the momentum relation
vbar^4 + 2 vz vbar^3 + (vz^2 + vx^2) vbar^2 - 1 = 0 with np.roots and
picks the physical branch, so it shares no code with the solver under
test.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from marsdrop.rotor_aero import (
    Regime,
    RotorFlowState,
    VRS_BUMP_AMPLITUDE,
    VRS_EXCESS_THRESHOLD,
    baseline_inflow_ratio,
    hover_induced_velocity,
    ideal_inflow_ratio,
    induced_velocity,
    thrust,
    torque,
    torque_coefficient,
    vrs_classify,
    vrs_excess_ratio,
)
from marsdrop.vehicle import preset

MAD = preset("mad").rotor


def oracle_inflow(vx: float, vz: float) -> float:
    """Momentum-theory vbar via the quartic companion-matrix roots."""
    roots = np.roots([1.0, 2.0 * vz, vz * vz + vx * vx, 0.0, -1.0])
    real = [r.real for r in roots if abs(r.imag) < 1e-9 and r.real > 0.0]
    if vz >= 0.0:
        cands = [r for r in real if vz + r > 0.0]
    else:
        cands = [r for r in real if vz + r < 0.0]
    assert cands, f"no physical root at vx={vx}, vz={vz}"
    return min(cands)


# -- momentum branch ---------------------------------------------------------


def test_hover_inflow_is_exactly_one():
    assert baseline_inflow_ratio(0.0, 0.0) == 1.0
    assert ideal_inflow_ratio(0.0, 0.0, 1.0) == 1.0


def test_fast_forward_flight_limit():
    # vx >> 1: vbar -> 1/vx
    assert baseline_inflow_ratio(5.0, 0.0) == pytest.approx(0.19984, abs=1e-5)


def test_windmill_quadratic_case():
    # at vx=0, vz=-3 the quartic factors to vbar^2 - 3 vbar + 1 = 0
    expected = (3.0 - math.sqrt(5.0)) / 2.0
    assert baseline_inflow_ratio(0.0, -3.0) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("seed", [0, 1])
def test_momentum_branch_matches_quartic_oracle(seed):
    rng = np.random.default_rng(seed)
    for _ in range(200):
        vx = rng.uniform(0.0, 6.0)
        if rng.uniform() < 0.5:
            vz = rng.uniform(0.0, 6.0)
        else:
            vz = rng.uniform(-8.0, -2.0)
        got = baseline_inflow_ratio(vx, vz)
        assert got == pytest.approx(oracle_inflow(vx, vz), rel=1e-9, abs=1e-12)


@given(
    vx=st.floats(0.0, 6.0),
    vz=st.floats(0.0, 6.0),
)
@settings(max_examples=60, deadline=None)
def test_climb_inflow_decreases_with_climb_rate(vx, vz):
    lo = baseline_inflow_ratio(vx, vz)
    hi = baseline_inflow_ratio(vx, vz + 0.5)
    assert 0.0 < lo <= 1.0 + 1e-12
    assert hi <= lo + 1e-12


# -- bridge and bump ---------------------------------------------------------


def test_bridge_continuity_at_endpoints():
    for vx in (0.0, 0.3, 0.8, 1.5):
        for edge in (0.0, -2.0):
            at = baseline_inflow_ratio(vx, edge)
            # windmill side has a square-root singularity in slope at -2,
            # so probe asymmetrically tight there
            eps = 1e-13
            assert baseline_inflow_ratio(vx, edge + eps) == pytest.approx(
                at, abs=1e-6
            )
            assert baseline_inflow_ratio(vx, edge - eps) == pytest.approx(
                at, abs=1e-6
            )


def test_bump_vanishes_outside_band_and_at_high_vx():
    assert ideal_inflow_ratio(0.0, 0.5, 1.0) == baseline_inflow_ratio(0.0, 0.5)
    assert ideal_inflow_ratio(0.0, -2.5, 1.0) == baseline_inflow_ratio(0.0, -2.5)
    assert ideal_inflow_ratio(1.2, -1.0, 1.0) == baseline_inflow_ratio(1.2, -1.0)


def test_bump_peak_amplitude_at_unit_descent():
    excess = ideal_inflow_ratio(0.0, -1.0, 1.0) - baseline_inflow_ratio(0.0, -1.0)
    assert excess == pytest.approx(VRS_BUMP_AMPLITUDE, rel=1e-12)


def test_bump_scales_linearly_with_f():
    full = ideal_inflow_ratio(0.2, -0.8, 1.0) - baseline_inflow_ratio(0.2, -0.8)
    half = ideal_inflow_ratio(0.2, -0.8, 0.5) - baseline_inflow_ratio(0.2, -0.8)
    assert half == pytest.approx(0.5 * full, rel=1e-12)


# -- thrust and induced velocity --------------------------------------------


def test_hover_induced_velocity_definition():
    assert hover_induced_velocity(8.0, 0.01, 2.0) == pytest.approx(
        math.sqrt(8.0 / (2.0 * 0.01 * 2.0)), rel=1e-12
    )
    with pytest.raises(ValueError):
        hover_induced_velocity(1.0, 0.0, 1.0)


def test_thrust_spot_values():
    rho = 0.01
    t_design = thrust(MAD.ct_sigma_design, MAD, rho, MAD.omega_design)
    t_max = thrust(MAD.ct_sigma_max, MAD, rho, MAD.omega_design)
    assert t_design == pytest.approx(14.713, abs=2e-3)
    assert t_max == pytest.approx(24.935, abs=2e-3)
    # saturation clip
    assert thrust(10.0, MAD, rho, MAD.omega_design) == t_max


@given(omega=st.floats(1.0, 300.0), scale=st.floats(1.1, 3.0))
@settings(max_examples=40, deadline=None)
def test_thrust_scales_with_tip_speed_squared(omega, scale):
    t1 = thrust(0.08, MAD, 0.01, omega)
    t2 = thrust(0.08, MAD, 0.01, omega * scale)
    assert t2 == pytest.approx(t1 * scale * scale, rel=1e-9)


def test_induced_velocity_hover_equals_k_vh():
    v_h = 25.0
    assert induced_velocity(0.0, 0.0, v_h, MAD) == pytest.approx(
        MAD.induced_loss_factor * v_h, rel=1e-12
    )
    assert induced_velocity(1.0, -3.0, 0.0, MAD) == 0.0


# -- regime classification ---------------------------------------------------


def test_classify_examples():
    assert vrs_classify(0.0, 1.0, MAD).regime is Regime.VRS
    assert vrs_classify(0.0, 1.0, MAD).severity == pytest.approx(1.0)
    assert vrs_classify(0.0, 2.0, MAD).regime is Regime.WINDMILL
    assert vrs_classify(1.5, 1.0, MAD).regime is Regime.NORMAL
    assert vrs_classify(0.0, 0.0, MAD).regime is Regime.NORMAL


def test_classify_threshold_boundary():
    # descent ratio where the axial bump equals the excess threshold
    d = 2.0 / math.pi * math.asin(math.sqrt(VRS_EXCESS_THRESHOLD / VRS_BUMP_AMPLITUDE))
    below = vrs_classify(0.0, 0.99 * d, MAD)
    above = vrs_classify(0.0, 1.01 * d, MAD)
    assert below.regime is Regime.NORMAL
    assert above.regime is Regime.VRS


def test_excess_ratio_symmetry_in_vx():
    assert vrs_excess_ratio(0.4, 0.9, MAD) == vrs_excess_ratio(-0.4, 0.9, MAD)


# -- torque ------------------------------------------------------------------


def test_profile_only_limit_exact():
    cq0 = torque_coefficient(0.0, 0.0, 0.0, MAD)
    assert cq0 == pytest.approx(MAD.mean_profile_drag * MAD.solidity / 8.0, rel=1e-12)


def test_torque_dimensional_form():
    rho = 0.009
    flow = RotorFlowState(v_x=0.0, v_z=0.0, omega=300.0, v_i=25.0, mu=0.0, lam=25.0 / (300.0 * MAD.radius))
    q = torque(0.095, flow, MAD, rho)
    cq = torque_coefficient(0.095, 0.0, flow.lam, MAD)
    tip = 300.0 * MAD.radius
    assert q == pytest.approx(cq * rho * MAD.disk_area * MAD.radius * tip * tip, rel=1e-12)
    with pytest.raises(ValueError):
        torque(0.095, RotorFlowState(0, 0, 0.0, 0, 0, 0), MAD, rho)


def test_stall_penalty_kicks_in_past_stall_ct():
    base = torque_coefficient(0.12, 0.0, 0.0, MAD)
    stalled = torque_coefficient(0.24, 0.0, 0.0, MAD)
    # the (ct_sigma/0.20)^20 term dominates past the stall knee
    assert stalled > 10.0 * base
