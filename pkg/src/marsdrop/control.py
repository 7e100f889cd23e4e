"""Rotor-speed PI loop, attitude PD loop and descent-angle guidance.

The guidance planner sweeps constant angle-of-attack candidates (90 deg
downward) and returns the largest one whose rotor-aligned normalized
velocity trace clears the VRS region, together with the altitude loss of
its forward-simulated deceleration to hover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rotor_aero
from .constants import G_MARS
from .rotor_aero import (
    RotorParams,
    VRS_BUMP_AMPLITUDE,
    VRS_EXCESS_THRESHOLD,
)

__all__ = [
    "PiTorqueController",
    "PdAttitudeController",
    "AlphaSchedule",
    "pi_step",
    "pd_step",
    "plan_alpha_schedule",
    "predict_altitude_loss",
    "default_pi_gains",
    "default_pd_gains",
]


@dataclass
class PiTorqueController:
    """Motor-torque PI loop tracking a rotor-speed command.

    The aerodynamic torque measurement is fed forward so the loop only
    has to null the speed error.  Conditional integration plus an
    integral clamp keep the state bounded under output saturation.
    """

    kp: float
    ki: float
    omega_cmd: float
    torque_max: float
    integral: float = 0.0

    @property
    def integral_cap(self) -> float:
        return self.torque_max / self.ki if self.ki > 0.0 else math.inf


def pi_step(
    ctrl: PiTorqueController, omega_meas: float, q_aero: float, dt: float
) -> float:
    """One PI update; returns the motor torque clamped to +-torque_max."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    err = ctrl.omega_cmd - omega_meas
    raw = q_aero + ctrl.kp * err + ctrl.ki * ctrl.integral
    out = min(max(raw, -ctrl.torque_max), ctrl.torque_max)
    # integrate only while it does not push further into the rail
    if out == raw or err * out < 0.0:
        cap = ctrl.integral_cap
        ctrl.integral = min(max(ctrl.integral + err * dt, -cap), cap)
    return out


@dataclass
class PdAttitudeController:
    """PD loop on the angle of attack of the rotor disk.

    ``alpha_cmd`` is the commanded angle between the flow-relative
    velocity and the disk plane (90 deg = axial flow), in radians.
    """

    kp: float
    kd: float
    alpha_cmd: float


def pd_step(
    ctrl: PdAttitudeController,
    alpha_meas: float,
    alpha_rate: float,
    toward_axis: np.ndarray,
) -> np.ndarray:
    """Attitude torque about ``toward_axis``.

    ``toward_axis`` is the unit direction about which a positive torque
    rotates the rotor axis toward larger angle of attack; ``alpha_rate``
    is the angular-rate component about the same axis.
    """
    mag = ctrl.kp * (ctrl.alpha_cmd - alpha_meas) - ctrl.kd * alpha_rate
    return mag * toward_axis


def default_pi_gains(rotor_inertia_pair: float, time_constant: float = 0.2):
    """(kp, ki) giving the commanded rotor-speed time constant."""
    kp = rotor_inertia_pair / time_constant
    return kp, kp / 1.0


def default_pd_gains(pitch_inertia: float, natural_freq: float = 3.0):
    """(kp, kd) for a critically damped attitude response."""
    kp = pitch_inertia * natural_freq**2
    kd = 2.0 * pitch_inertia * natural_freq
    return kp, kd


@dataclass(frozen=True)
class AlphaSchedule:
    """Piecewise-constant angle-of-attack plan keyed on |V|/v_h.

    ``entries`` are (trigger, alpha_rad) pairs with strictly decreasing
    triggers; the alpha of the last entry whose trigger is >= the current
    speed ratio applies.  ``safe`` is False when no candidate cleared the
    (margin-tightened) VRS region.
    """

    entries: list[tuple[float, float]]
    predicted_altitude_loss: float
    safe: bool = True
    peak_excess: float = 0.0

    def __post_init__(self):
        triggers = [t for t, _ in self.entries]
        if any(b >= a for a, b in zip(triggers, triggers[1:])):
            raise ValueError("triggers must be strictly decreasing")
        if any(not 0.0 <= a <= math.pi / 2 + 1e-12 for _, a in self.entries):
            raise ValueError("alphas must lie in [0, 90 deg]")

    def alpha_for_ratio(self, ratio: float) -> float:
        alpha = self.entries[0][1]
        for trigger, a in self.entries:
            if trigger >= ratio:
                alpha = a
            else:
                break
        return alpha


def _thrust_to_weight_max(v_h: float, params: RotorParams) -> float:
    """Max thrust over hover thrust implied by the normalization v_h."""
    tip = params.omega_design * params.radius
    return params.ct_sigma_max * params.solidity * tip * tip / (2.0 * v_h * v_h)


def _forward_sim(
    schedule: AlphaSchedule,
    v0: float,
    v_h: float,
    params: RotorParams,
    dt: float = 0.02,
    t_max: float = 300.0,
    stop_speed: float = 0.5,
):
    """Planar point-mass deceleration under the schedule.

    Thrust acts along the rotor axis, held at the commanded angle of
    attack relative to the instantaneous velocity, at maximum thrust
    coefficient.  Returns (altitude_loss, trace, converged) where the
    trace holds rotor-aligned normalized points (vx_bar, vz_bar_descent).
    """
    tw = _thrust_to_weight_max(v_h, params)
    a_thrust = tw * G_MARS
    vx, vz = 0.0, -v0  # horizontal, vertical (up-positive)
    h = 0.0
    trace = []
    t = 0.0
    while t < t_max:
        s = math.hypot(vx, vz)
        if s <= stop_speed:
            return -min(h, 0.0), trace, True
        alpha = schedule.alpha_for_ratio(s / v_h)
        trace.append((s * math.cos(alpha) / v_h, s * math.sin(alpha) / v_h))
        # rotor axis: -V rotated by (90deg - alpha), tilted toward +x
        ux, uz = -vx / s, -vz / s
        tilt = math.pi / 2 - alpha
        ct_, st_ = math.cos(tilt), math.sin(tilt)
        # rotate (ux, uz) by -tilt or +tilt, whichever pushes +x
        ax1, az1 = ct_ * ux + st_ * uz, -st_ * ux + ct_ * uz
        ax2, az2 = ct_ * ux - st_ * uz, st_ * ux + ct_ * uz
        ax, az = (ax1, az1) if ax1 >= ax2 else (ax2, az2)
        dvx = a_thrust * ax
        dvz = a_thrust * az - G_MARS
        vx += dvx * dt
        vz += dvz * dt
        h += vz * dt
        t += dt
    return -min(h, 0.0), trace, False


def predict_altitude_loss(
    alpha: float, v0: float, v_h: float, params: RotorParams, margin: float = 0.0
) -> tuple[float, bool]:
    """Altitude lost decelerating from v0 to hover at constant ``alpha``
    (with the terminal pitch-up to 90 deg); returns (loss, converged)."""
    schedule = _candidate_schedule(alpha, v0, v_h, params, margin)
    loss, _, converged = _forward_sim(schedule, v0, v_h, params)
    return loss, converged


def _capture_ratio(params: RotorParams, threshold: float) -> float:
    """Largest axial-descent speed ratio safe for the final 90-deg pitch."""
    f = params.vrs_instability_factor
    if f <= 0.0 or threshold >= f * VRS_BUMP_AMPLITUDE:
        return math.inf
    d = 2.0 / math.pi * math.asin(math.sqrt(threshold / (f * VRS_BUMP_AMPLITUDE)))
    return 0.95 * d


def _candidate_schedule(
    alpha: float, v0: float, v_h: float, params: RotorParams, margin: float
) -> AlphaSchedule:
    threshold = VRS_EXCESS_THRESHOLD * (1.0 - margin)
    top = max(2.0, 1.5 * v0 / v_h)
    capture = _capture_ratio(params, threshold)
    if alpha >= math.pi / 2 - 1e-12 or capture >= top:
        entries = [(top, math.pi / 2)]
    else:
        entries = [(top, alpha), (capture, math.pi / 2)]
    return AlphaSchedule(entries, predicted_altitude_loss=0.0)


def plan_alpha_schedule(
    v0: float, v_h: float, margin: float, params: RotorParams
) -> AlphaSchedule:
    """Sweep constant-alpha candidates from 90 deg down in 1-deg steps.

    ``margin`` in [0, 1) tightens the VRS excess threshold to
    ``0.05 * (1 - margin)``; a candidate is safe when every point of its
    forward-simulated rotor-aligned trace stays below that excess.
    """
    if v0 < 0.0 or v_h <= 0.0 or margin < 0.0:
        raise ValueError("require v0 >= 0, v_h > 0, margin >= 0")
    threshold = VRS_EXCESS_THRESHOLD * (1.0 - margin)
    if threshold <= 0.0:
        return AlphaSchedule(
            [(2.0, math.pi / 2)], math.inf, safe=False, peak_excess=math.inf
        )
    if v0 == 0.0:
        return AlphaSchedule([(2.0, math.pi / 2)], 0.0, safe=True)

    best_flagged = None
    for alpha_deg in range(90, -1, -1):
        alpha = math.radians(alpha_deg)
        schedule = _candidate_schedule(alpha, v0, v_h, params, margin)
        loss, trace, converged = _forward_sim(schedule, v0, v_h, params)
        peak = max(
            (rotor_aero.vrs_excess_ratio(vx, d, params) for vx, d in trace),
            default=0.0,
        )
        if converged and peak <= threshold:
            return AlphaSchedule(
                schedule.entries, loss, safe=True, peak_excess=peak
            )
        if best_flagged is None or peak < best_flagged.peak_excess:
            best_flagged = AlphaSchedule(
                schedule.entries, loss, safe=False, peak_excess=peak
            )
    return best_flagged
