"""PI/PD loops and the angle-of-attack guidance planner."""

import math

import numpy as np
import pytest

from marsdrop.control import (
    AlphaSchedule,
    PdAttitudeController,
    PiTorqueController,
    default_pd_gains,
    default_pi_gains,
    pd_step,
    pi_step,
    plan_alpha_schedule,
    predict_altitude_loss,
)
from marsdrop.vehicle import preset

MAD = preset("mad").rotor


# -- PI speed loop -----------------------------------------------------------


def test_pi_feedforward_passthrough_at_zero_error():
    ctrl = PiTorqueController(kp=1.0, ki=1.0, omega_cmd=300.0, torque_max=4.41)
    assert pi_step(ctrl, 300.0, 2.0, 0.01) == pytest.approx(2.0)


def test_pi_output_saturates():
    ctrl = PiTorqueController(kp=10.0, ki=1.0, omega_cmd=300.0, torque_max=4.41)
    assert pi_step(ctrl, 0.0, 0.0, 0.01) == 4.41
    assert pi_step(ctrl, 600.0, 0.0, 0.01) == -4.41
    with pytest.raises(ValueError):
        pi_step(ctrl, 300.0, 0.0, 0.0)


def test_pi_antiwindup_bounds_integral():
    ctrl = PiTorqueController(kp=0.1, ki=5.0, omega_cmd=300.0, torque_max=4.41)
    for _ in range(10000):
        pi_step(ctrl, 0.0, 0.0, 0.01)
    assert abs(ctrl.integral) <= ctrl.integral_cap + 1e-12
    # loop recovers promptly once the error flips
    out = pi_step(ctrl, 600.0, 0.0, 0.01)
    assert out < 4.41


def test_pi_first_order_convergence():
    """A pure-inertia plant with feedforwarded load torque converges to
    the command with the design time constant."""
    inertia = 2.0 * MAD.rotor_inertia
    kp, ki = default_pi_gains(inertia, time_constant=0.2)
    ctrl = PiTorqueController(kp=kp, ki=ki, omega_cmd=301.8, torque_max=4.41)
    omega, dt = 295.0, 1e-3
    peak = 0.0
    for _ in range(int(5.0 / dt)):
        q = pi_step(ctrl, omega, 0.0, dt)
        omega += q / inertia * dt
        peak = max(peak, omega)
    assert omega == pytest.approx(301.8, abs=0.01)
    # mild overshoot from the integral state, bounded well under 1%
    assert peak < 301.8 * 1.005


# -- PD attitude loop --------------------------------------------------------


def test_pd_step_direction_and_magnitude():
    ctrl = PdAttitudeController(kp=2.0, kd=0.5, alpha_cmd=math.pi / 2)
    axis = np.array([0.0, 1.0, 0.0])
    torque = pd_step(ctrl, math.radians(80.0), 0.1, axis)
    expected = 2.0 * (math.pi / 2 - math.radians(80.0)) - 0.5 * 0.1
    np.testing.assert_allclose(torque, expected * axis, rtol=1e-12)


def test_pd_settles_critically_damped():
    """Second-order plant: settles within 2 s, overshoot below 10%."""
    inertia = preset("mad").inertia[0, 0]
    kp, kd = default_pd_gains(inertia, natural_freq=3.0)
    ctrl = PdAttitudeController(kp=kp, kd=kd, alpha_cmd=math.pi / 2)
    alpha, rate, dt = math.radians(80.0), 0.0, 1e-3
    overshoot = 0.0
    history = []
    for i in range(int(3.0 / dt)):
        q = pd_step(ctrl, alpha, rate, np.array([1.0]))[0]
        rate += q / inertia * dt
        alpha += rate * dt
        overshoot = max(overshoot, alpha - math.pi / 2)
        history.append((i * dt, alpha))
    err0 = math.pi / 2 - math.radians(80.0)
    assert overshoot < 0.1 * err0
    settled = [abs(a - math.pi / 2) < 0.02 * err0 for t, a in history if t > 2.0]
    assert all(settled)


# -- guidance planner --------------------------------------------------------


def test_schedule_validation_and_lookup():
    sched = AlphaSchedule(
        [(2.0, math.radians(30.0)), (0.3, math.pi / 2)], predicted_altitude_loss=300.0
    )
    assert sched.alpha_for_ratio(1.5) == pytest.approx(math.radians(30.0))
    assert sched.alpha_for_ratio(0.2) == pytest.approx(math.pi / 2)
    # above the top trigger the first entry applies
    assert sched.alpha_for_ratio(5.0) == pytest.approx(math.radians(30.0))
    with pytest.raises(ValueError):
        AlphaSchedule([(1.0, 0.1), (2.0, 0.2)], predicted_altitude_loss=0.0)
    with pytest.raises(ValueError):
        AlphaSchedule([(1.0, -0.1)], predicted_altitude_loss=0.0)


def test_plan_rejects_bad_inputs():
    with pytest.raises(ValueError):
        plan_alpha_schedule(-1.0, 25.0, 0.0, MAD)
    with pytest.raises(ValueError):
        plan_alpha_schedule(30.0, 0.0, 0.0, MAD)


def test_plan_trivial_at_zero_speed():
    sched = plan_alpha_schedule(0.0, 25.0, 0.0, MAD)
    assert sched.safe
    assert sched.predicted_altitude_loss == 0.0


def test_plan_returns_safe_tilted_schedule():
    sched = plan_alpha_schedule(30.0, 25.84, 0.0, MAD)
    assert sched.safe
    alpha0 = sched.entries[0][1]
    assert alpha0 < math.pi / 2
    assert sched.peak_excess <= 0.05
    assert math.isfinite(sched.predicted_altitude_loss)


def test_margin_tightens_the_plan():
    loose = plan_alpha_schedule(30.0, 25.84, 0.0, MAD)
    tight = plan_alpha_schedule(30.0, 25.84, 0.5, MAD)
    assert tight.peak_excess <= 0.05 * 0.5 + 1e-12
    # a tighter exclusion can only hold or lower the allowed alpha
    assert tight.entries[0][1] <= loose.entries[0][1] + 1e-12


def test_vertical_deceleration_loss_prediction():
    loss, converged = predict_altitude_loss(math.pi / 2, 30.0, 25.84, MAD)
    assert converged
    assert 150.0 < loss < 350.0


def test_tilted_descent_costs_more_altitude():
    loss90, _ = predict_altitude_loss(math.pi / 2, 30.0, 25.84, MAD)
    sched = plan_alpha_schedule(30.0, 25.84, 0.0, MAD)
    assert sched.predicted_altitude_loss > loss90
