"""End-to-end scenario integration and the phase state machine.

Phases run entry -> chute -> extended (spin-up while attached) ->
released -> hover.  The released phase integrates the 13-dimensional
body state (position, velocity, rotor axis, body rates, rotor speed)
with fixed-step RK4; earlier phases reuse the EDL integrators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import control, edl, rotor_aero
from .atmosphere import AtmosphereModel, ambient_at
from .constants import G_MARS
from .control import AlphaSchedule, PdAttitudeController, PiTorqueController
from .edl import ChuteConfig, EntryConfig
from .trajectory import TrajectoryLog, detect_event  # noqa: F401  (re-export)
from .vehicle import BodyState, RotorCommand, VehicleConfig, total_wrench

__all__ = [
    "MissionConfig",
    "SimulationError",
    "step",
    "run_scenario",
    "detect_event",
    "SIM_COLUMNS",
]

SIM_COLUMNS = [
    "t_s",
    "phase",
    "altitude_m",
    "vx_ms",
    "vy_ms",
    "vz_ms",
    "speed_ms",
    "mach",
    "alpha_deg",
    "omega_rads",
    "ct_sigma",
    "q_aero_nm",
    "q_motor_nm",
    "vi_ms",
    "vh_ms",
    "vx_bar",
    "vz_bar",
    "regime",
    "severity",
]


class SimulationError(RuntimeError):
    """Non-finite state or invalid scenario configuration."""


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # unrolled 3-vector cross product; np.cross dominates the RK4 cost
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


@dataclass
class MissionConfig:
    """Scenario description for :func:`run_scenario`."""

    vehicle: VehicleConfig
    atmosphere: AtmosphereModel
    entry: EntryConfig | None = None
    chute: ChuteConfig | None = None
    release_altitude: float = 6000.0
    release_speed: float = 30.0
    release_alpha: float = math.pi / 2
    spin_up_time: float = 5.0
    guidance_mode: str = "fixed"  # fixed | planned
    guidance_margin: float = 0.0
    pi_kp: float | None = None
    pi_ki: float | None = None
    pd_kp: float | None = None
    pd_kd: float | None = None
    trim_capture_gain: float = 0.3
    hover_speed: float = 0.5
    hover_hold: float = 1.0
    dt_entry: float = 0.05
    dt_chute: float = 0.01
    dt_released: float = 0.001
    t_max: float = 120.0
    log_interval: float = 0.01

    def __post_init__(self):
        for dt in (self.dt_entry, self.dt_chute, self.dt_released):
            if dt <= 0.0:
                raise ValueError("time steps must be positive")
        lo, hi = self.atmosphere.span
        if not lo <= self.release_altitude <= hi:
            raise ValueError("release altitude outside atmosphere span")
        if self.guidance_mode not in ("fixed", "planned"):
            raise ValueError("guidance_mode must be 'fixed' or 'planned'")


def _deriv(
    y: np.ndarray,
    cmd: RotorCommand,
    config: VehicleConfig,
    atm: AtmosphereModel,
    inertia_diag: np.ndarray,
    rotor_pair_inertia: float,
) -> np.ndarray:
    pos, vel, axis, rates = y[0:3], y[3:6], y[6:9], y[9:12]
    omega = min(max(y[12], 0.0), config.rotor.omega_max)
    axis = axis / math.sqrt(float(axis @ axis))
    state = BodyState(pos, vel, axis, rates, omega)
    ambient = ambient_at(atm, pos[2])
    wrench = total_wrench(state, cmd, ambient, config)
    out = np.empty(13)
    out[0:3] = vel
    out[3:6] = wrench.force / config.gross_mass
    out[6:9] = _cross(rates, axis)
    gyro = _cross(rates, inertia_diag * rates)
    out[9:12] = (wrench.torque - gyro) / inertia_diag
    out[12] = (cmd.motor_torque - wrench.aero_torque) / rotor_pair_inertia
    return out


def step(
    config: VehicleConfig,
    atm: AtmosphereModel,
    state: BodyState,
    cmd: RotorCommand,
    dt: float,
) -> BodyState:
    """One RK4 step of the released-phase dynamics with the command held.

    Renormalizes the rotor axis and clamps the rotor speed to
    [0, omega_max]; aborts on non-finite state.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    inertia_diag = np.diag(config.inertia).astype(float)
    pair = 2.0 * config.rotor.rotor_inertia
    y = np.concatenate(
        [state.position, state.velocity, state.rotor_axis, state.angular_rate,
         [state.omega]]
    )
    k1 = _deriv(y, cmd, config, atm, inertia_diag, pair)
    k2 = _deriv(y + 0.5 * dt * k1, cmd, config, atm, inertia_diag, pair)
    k3 = _deriv(y + 0.5 * dt * k2, cmd, config, atm, inertia_diag, pair)
    k4 = _deriv(y + dt * k3, cmd, config, atm, inertia_diag, pair)
    y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y)):
        raise SimulationError(f"non-finite state after step: {y}")
    axis = y[6:9]
    axis /= math.sqrt(float(axis @ axis))
    return BodyState(
        position=y[0:3],
        velocity=y[3:6],
        rotor_axis=axis,
        angular_rate=y[9:12],
        omega=min(max(y[12], 0.0), config.rotor.omega_max),
    )


def _alpha_geometry(state: BodyState, wind: np.ndarray):
    """Angle of attack, the unit axis that raises it, and the alpha rate.

    Degenerate (near-zero flow) states report alpha = 90 deg with no
    preferred rotation axis.
    """
    v_rel = state.velocity - wind
    speed = math.sqrt(float(v_rel @ v_rel))
    if speed < 1e-6:
        return math.pi / 2, np.zeros(3), 0.0
    v_hat = v_rel / speed
    c = float(v_hat @ state.rotor_axis)
    alpha = math.asin(min(abs(c), 1.0))
    target = math.copysign(1.0, c) * v_hat
    raw = _cross(state.rotor_axis, target)
    norm = math.sqrt(float(raw @ raw))
    if norm < 1e-9:
        return alpha, np.zeros(3), 0.0
    n = raw / norm
    return alpha, n, float(state.angular_rate @ n)


def _ct_command(
    state: BodyState, rho: float, config: VehicleConfig, capture_gain: float
) -> float:
    """Two-stage braking law: max thrust coefficient above the local
    hover-reference induced velocity, then trim-seeking capture."""
    params = config.rotor
    v_h_ref = math.sqrt(
        config.gross_mass * G_MARS / (2.0 * rho * params.disk_area)
    )
    speed = math.sqrt(float(state.velocity @ state.velocity))
    if speed >= v_h_ref:
        return params.ct_sigma_max
    tip = state.omega * params.radius
    if tip <= 0.0:
        return params.ct_sigma_max
    vz = float(state.velocity[2])
    t_des = config.gross_mass * (G_MARS - capture_gain * vz)
    ct_sigma = t_des / (rho * params.disk_area * tip * tip * params.solidity)
    return min(max(ct_sigma, 0.0), params.ct_sigma_max)


def _edl_rows(log: TrajectoryLog, out: TrajectoryLog, t0: float, phase_omega=None):
    """Map an EDL log into the full scenario schema (rotor columns zeroed)."""
    for t, h, v, mach, phase in log.rows:
        omega = 0.0
        if phase_omega is not None:
            phase, omega = phase_omega(t)
        out.append(
            t0 + t, phase, h, 0.0, 0.0, -v, abs(v), mach, 0.0, omega,
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, "", 0.0,
        )
    return t0 + (log.rows[-1][0] if log.rows else 0.0)


def _released_row(
    log, t, state, speed, ambient, alpha, ct_sigma, q_motor, probe, params
) -> None:
    flow = probe.flow
    v_h = probe.v_h
    if v_h > 0.0:
        vx_bar, vz_bar = flow.v_x / v_h, -flow.v_z / v_h
    else:
        vx_bar, vz_bar = 0.0, 0.0
    res = rotor_aero.vrs_classify(vx_bar, vz_bar, params)
    log.append(
        t, "released", float(state.position[2]),
        float(state.velocity[0]), float(state.velocity[1]),
        float(state.velocity[2]), speed, speed / ambient.sound_speed,
        math.degrees(alpha), state.omega, ct_sigma,
        probe.aero_torque, q_motor, flow.v_i, v_h,
        vx_bar, vz_bar, res.regime.value, res.severity,
    )


def run_scenario(cfg: MissionConfig) -> TrajectoryLog:
    """Run the configured phases and log the full trajectory.

    Hover is declared when |velocity| stays below ``hover_speed`` for
    ``hover_hold`` seconds; the run is flagged incomplete when ``t_max``
    elapses in the released phase first.
    """
    atm = cfg.atmosphere
    vehicle = cfg.vehicle
    params = vehicle.rotor
    omega_cmd = min(params.omega_design, params.omega_max)
    log = TrajectoryLog(columns=list(SIM_COLUMNS))

    t = 0.0
    release_speed = cfg.release_speed
    if cfg.entry is not None:
        entry_log = edl.simulate_entry(cfg.entry, atm, cfg.dt_entry)
        t = _edl_rows(entry_log, log, t)
        if entry_log.status != "ok":
            log.status = "entry_trigger_not_reached"
            return log
        log.events.append((entry_log.event_time("chute_deploy"), "chute_deploy"))
        chute_start_altitude = entry_log.last("altitude_m")
        chute_start_speed = entry_log.last("speed_ms")
    else:
        chute_start_altitude = None
        chute_start_speed = None

    if cfg.chute is not None:
        if chute_start_altitude is None:
            chute_start_altitude = cfg.release_altitude + 9000.0
            chute_start_speed = edl.chute_terminal_velocity(
                cfg.chute, ambient_at(atm, chute_start_altitude).density
            )
        chute_log = edl.simulate_chute_descent(
            cfg.chute, atm, chute_start_altitude, chute_start_speed,
            stop_altitude=cfg.release_altitude, dt=cfg.dt_chute,
        )
        if chute_log.status != "ok" or not chute_log.events:
            log.status = "chute_incomplete"
            return log
        t_rel = chute_log.rows[-1][0]

        def phase_omega(tc, t_rel=t_rel):
            if tc < t_rel - cfg.spin_up_time:
                return "chute", 0.0
            frac = 1.0 - (t_rel - tc) / cfg.spin_up_time
            return "extended", omega_cmd * min(max(frac, 0.0), 1.0)

        t = _edl_rows(chute_log, log, t, phase_omega)
        release_speed = chute_log.last("speed_ms")

    log.events.append((t, "release"))

    alpha0 = cfg.release_alpha
    state = BodyState(
        position=np.array([0.0, 0.0, cfg.release_altitude]),
        velocity=np.array([0.0, 0.0, -release_speed]),
        rotor_axis=np.array([math.cos(alpha0), 0.0, math.sin(alpha0)]),
        angular_rate=np.zeros(3),
        omega=omega_cmd,
    )

    pair = 2.0 * params.rotor_inertia
    kp_pi, ki_pi = control.default_pi_gains(pair)
    pi = PiTorqueController(
        kp=cfg.pi_kp if cfg.pi_kp is not None else kp_pi,
        ki=cfg.pi_ki if cfg.pi_ki is not None else ki_pi,
        omega_cmd=omega_cmd,
        torque_max=params.torque_max,
    )
    kp_pd, kd_pd = control.default_pd_gains(float(vehicle.inertia[0, 0]))
    pd = PdAttitudeController(
        kp=cfg.pd_kp if cfg.pd_kp is not None else kp_pd,
        kd=cfg.pd_kd if cfg.pd_kd is not None else kd_pd,
        alpha_cmd=alpha0,
    )

    schedule: AlphaSchedule | None = None
    v_h_plan = math.sqrt(
        vehicle.gross_mass * G_MARS
        / (2.0 * ambient_at(atm, cfg.release_altitude).density * params.disk_area)
    )
    if cfg.guidance_mode == "planned":
        schedule = control.plan_alpha_schedule(
            release_speed, v_h_plan, cfg.guidance_margin, params
        )

    dt = cfg.dt_released
    stride = max(1, round(cfg.log_interval / dt))
    t_release = t
    hover_since = None
    hovered = False
    i = 0

    while True:
        ambient = ambient_at(atm, state.position[2])
        ct_sigma = _ct_command(state, ambient.density, vehicle, cfg.trim_capture_gain)
        alpha, n, alpha_rate = _alpha_geometry(state, ambient.wind)
        probe = total_wrench(state, RotorCommand(ct_sigma), ambient, vehicle)
        if schedule is not None:
            speed = math.sqrt(float(state.velocity @ state.velocity))
            pd.alpha_cmd = schedule.alpha_for_ratio(speed / v_h_plan)
        q_motor = control.pi_step(pi, state.omega, probe.aero_torque, dt)
        q_att = control.pd_step(pd, alpha, alpha_rate, n)
        cmd = RotorCommand(ct_sigma, q_motor, q_att)

        speed = math.sqrt(float(state.velocity @ state.velocity))
        stop = False
        if speed < cfg.hover_speed:
            if hover_since is None:
                hover_since = t
            elif t - hover_since >= cfg.hover_hold:
                hovered = True
                stop = True
        else:
            hover_since = None
        if t - t_release >= cfg.t_max:
            stop = True

        if i % stride == 0 or stop:
            _released_row(
                log, t, state, speed, ambient, alpha, ct_sigma, q_motor, probe, params
            )
        if stop:
            break
        state = step(vehicle, atm, state, cmd, dt)
        t += dt
        i += 1

    if hovered:
        log.events.append((t, "hover"))
    else:
        log.status = "incomplete"
    return log
