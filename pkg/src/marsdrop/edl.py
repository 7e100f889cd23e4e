"""Pre-release phases: ballistic entry, parachute descent, separation.

Entry is a planar 3-DOF point mass (drag + gravity, no lift) over a
spherical planet; the parachute phase is a vertical 1-DOF descent.  Both
use fixed-step RK4 and log altitude/speed/Mach histories compatible with
:func:`marsdrop.trajectory.detect_event`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .atmosphere import AtmosphereModel, ambient_at
from .constants import G_MARS, R_MARS
from .trajectory import TrajectoryLog

__all__ = [
    "EntryConfig",
    "ChuteConfig",
    "SeparationModel",
    "MissionEdlPreset",
    "simulate_entry",
    "chute_terminal_velocity",
    "simulate_chute_descent",
    "separation_clearance",
    "mission_preset",
    "MISSION_NAMES",
]

EDL_COLUMNS = ["t_s", "altitude_m", "speed_ms", "mach", "phase"]


@dataclass(frozen=True)
class EntryConfig:
    """Ballistic entry parameters for a 70-deg sphere-cone aeroshell."""

    entry_mass: float
    entry_velocity: float
    flight_path_angle: float  # rad, negative below horizon
    aeroshell_diameter: float = 2.65
    hypersonic_cd: float = 1.7
    entry_altitude: float = 125_000.0
    deploy_mach_max: float = 2.0

    def __post_init__(self):
        if self.entry_mass <= 0.0:
            raise ValueError("entry_mass must be positive")
        if self.aeroshell_diameter <= 0.0:
            raise ValueError("aeroshell_diameter must be positive")
        if not -math.pi / 2 < self.flight_path_angle < 0.0:
            raise ValueError("flight_path_angle must be in (-90 deg, 0)")

    @property
    def reference_area(self) -> float:
        return math.pi * (self.aeroshell_diameter / 2.0) ** 2

    @property
    def ballistic_coefficient(self) -> float:
        return self.entry_mass / (self.hypersonic_cd * self.reference_area)


@dataclass(frozen=True)
class ChuteConfig:
    """Disk-gap-band parachute and suspended load."""

    nominal_diameter: float = 14.0
    drag_coefficient: float = 0.62
    suspended_mass: float = 149.1
    deploy_mach_max: float = 2.0
    deploy_altitude_min: float = 0.0

    def __post_init__(self):
        if self.nominal_diameter <= 0.0:
            raise ValueError("nominal_diameter must be positive")
        if self.suspended_mass <= 0.0:
            raise ValueError("suspended_mass must be positive")

    @property
    def canopy_area(self) -> float:
        return math.pi * self.nominal_diameter**2 / 4.0

    @property
    def drag_area(self) -> float:
        return self.drag_coefficient * self.canopy_area


@dataclass(frozen=True)
class SeparationModel:
    """Ballistic coefficients of the two bodies after release."""

    beta_backshell: float
    beta_vehicle: float

    def __post_init__(self):
        if self.beta_backshell <= 0.0 or self.beta_vehicle <= 0.0:
            raise ValueError("ballistic coefficients must be positive")


def simulate_entry(
    cfg: EntryConfig, atm: AtmosphereModel, dt: float = 0.05
) -> TrajectoryLog:
    """Integrate the entry until the chute-deploy Mach trigger or ground.

    Logs t/altitude/speed/Mach; on trigger an interpolated
    ``chute_deploy`` event is recorded, otherwise status is set to
    ``trigger_not_reached``.
    """
    beta = cfg.ballistic_coefficient
    log = TrajectoryLog(columns=list(EDL_COLUMNS))

    def deriv(v, gamma, h):
        rho = ambient_at(atm, h).density
        dv = -rho * v * v / (2.0 * beta) - G_MARS * math.sin(gamma)
        dgamma = (v / (R_MARS + h) - G_MARS / v) * math.cos(gamma)
        dh = v * math.sin(gamma)
        return dv, dgamma, dh

    t = 0.0
    v, gamma, h = cfg.entry_velocity, cfg.flight_path_angle, cfg.entry_altitude
    mach = v / ambient_at(atm, h).sound_speed
    log.append(t, h, v, mach, "entry")
    prev = (t, h, v, mach)
    while mach > cfg.deploy_mach_max and h > 0.0:
        k1 = deriv(v, gamma, h)
        k2 = deriv(v + 0.5 * dt * k1[0], gamma + 0.5 * dt * k1[1], h + 0.5 * dt * k1[2])
        k3 = deriv(v + 0.5 * dt * k2[0], gamma + 0.5 * dt * k2[1], h + 0.5 * dt * k2[2])
        k4 = deriv(v + dt * k3[0], gamma + dt * k3[1], h + dt * k3[2])
        v += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        gamma += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        h += dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        t += dt
        mach = v / ambient_at(atm, h).sound_speed
        log.append(t, h, v, mach, "entry")
        if mach <= cfg.deploy_mach_max:
            t0, h0, v0, m0 = prev
            frac = (m0 - cfg.deploy_mach_max) / (m0 - mach)
            log.events.append((t0 + frac * (t - t0), "chute_deploy"))
            return log
        prev = (t, h, v, mach)
    log.status = "trigger_not_reached"
    return log


def chute_terminal_velocity(chute: ChuteConfig, rho: float) -> float:
    """Equilibrium descent speed sqrt(2 m g / (rho Cd S0))."""
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    return math.sqrt(2.0 * chute.suspended_mass * G_MARS / (rho * chute.drag_area))


def simulate_chute_descent(
    chute: ChuteConfig,
    atm: AtmosphereModel,
    start_altitude: float,
    start_speed: float,
    stop_altitude: float | None = None,
    dt: float = 0.01,
    t_max: float = 2000.0,
) -> TrajectoryLog:
    """Vertical descent under the canopy down to the release altitude.

    ``start_speed`` is descent-positive.  Stops at ``stop_altitude``
    (release trigger, event ``release``) or at the ground.
    """
    m = chute.suspended_mass
    cds = chute.drag_area
    floor = 0.0 if stop_altitude is None else stop_altitude
    log = TrajectoryLog(columns=list(EDL_COLUMNS))

    def deriv(v, h):
        rho = ambient_at(atm, h).density
        return G_MARS - rho * v * abs(v) * cds / (2.0 * m), -v

    t, v, h = 0.0, start_speed, start_altitude
    mach = v / ambient_at(atm, h).sound_speed
    log.append(t, h, v, mach, "chute")
    while h > floor and t < t_max:
        k1 = deriv(v, h)
        k2 = deriv(v + 0.5 * dt * k1[0], h + 0.5 * dt * k1[1])
        k3 = deriv(v + 0.5 * dt * k2[0], h + 0.5 * dt * k2[1])
        k4 = deriv(v + dt * k3[0], h + dt * k3[1])
        v += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        h += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        t += dt
        log.append(t, h, v, v / ambient_at(atm, h).sound_speed, "chute")
    if stop_altitude is not None and h <= floor:
        log.events.append((t, "release"))
    elif t >= t_max:
        log.status = "incomplete"
    return log


def separation_clearance(
    sep: SeparationModel, v0: float, rho: float, t: float, dt: float = 0.01
) -> float:
    """Vertical gap between vehicle and backshell ``t`` seconds after a
    clean release from a shared state at descent speed ``v0``.

    Positive when the (higher-beta) vehicle is below the backshell.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")

    def fall(beta):
        v, z = v0, 0.0  # z is distance fallen
        steps = int(round(t / dt))
        span = t / steps if steps else 0.0

        def deriv(v):
            return G_MARS - rho * v * abs(v) / (2.0 * beta)

        for _ in range(steps):
            k1 = deriv(v)
            k2 = deriv(v + 0.5 * span * k1)
            k3 = deriv(v + 0.5 * span * k2)
            k4 = deriv(v + span * k3)
            z += span * v + span**2 / 6.0 * (k1 + k2 + k3)
            v += span / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        return z

    return fall(sep.beta_vehicle) - fall(sep.beta_backshell)


@dataclass(frozen=True)
class MissionEdlPreset:
    """Entry/chute scenario mirroring the historical-mission comparison."""

    name: str
    entry: EntryConfig
    chute: ChuteConfig
    heatshield_mass: float
    backshell_chute_mass: float
    landed_mass: float
    terminal_velocity_table: float


_MISSIONS = {
    "pathfinder": dict(
        entry_mass=586.7,
        entry_velocity=7260.0,
        fpa_deg=-14.1,
        heatshield=70.0,
        backshell_chute=145.0,
        landed=370.0,
        terminal=63.0,
    ),
    "insight": dict(
        entry_mass=625.0,
        entry_velocity=6300.0,
        fpa_deg=-12.0,
        heatshield=74.4,
        backshell_chute=115.6,
        landed=384.0,
        terminal=63.0,
    ),
    "mad": dict(
        entry_mass=256.0,
        entry_velocity=7300.0,
        fpa_deg=-12.0,
        heatshield=70.0,
        backshell_chute=145.0,
        landed=4.141,
        terminal=30.0,
    ),
}

MISSION_NAMES = tuple(_MISSIONS)


def mission_preset(name: str) -> MissionEdlPreset:
    """EDL mission presets: pathfinder, insight, mad.

    The chute suspended mass is backshell+chute plus the landed element;
    the heatshield (and any remaining entry-budget residual) is treated
    as jettisoned before the chute equilibrium matters.
    """
    try:
        entry = _MISSIONS[name]
    except KeyError:
        raise ValueError(f"unknown mission {name!r}; expected one of {MISSION_NAMES}")
    return MissionEdlPreset(
        name=name,
        entry=EntryConfig(
            entry_mass=entry["entry_mass"],
            entry_velocity=entry["entry_velocity"],
            flight_path_angle=math.radians(entry["fpa_deg"]),
        ),
        chute=ChuteConfig(suspended_mass=entry["backshell_chute"] + entry["landed"]),
        heatshield_mass=entry["heatshield"],
        backshell_chute_mass=entry["backshell_chute"],
        landed_mass=entry["landed"],
        terminal_velocity_table=entry["terminal"],
    )


# Drag coefficient of the helicopter in autorotation, referenced to the
# rotor disk area; calibrated to the published 3.24 kg/m^2 coefficient.
AUTOROTATION_CD = 1.11


def mad_separation_model() -> SeparationModel:
    """Backshell+chute vs helicopter-in-autorotation pair at release."""
    mission = mission_preset("mad")
    disk = math.pi * 0.605**2
    return SeparationModel(
        beta_backshell=mission.backshell_chute_mass / mission.chute.drag_area,
        beta_vehicle=mission.landed_mass / (AUTOROTATION_CD * disk),
    )
