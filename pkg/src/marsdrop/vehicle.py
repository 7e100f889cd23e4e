"""Vehicle configuration, rigid-body state and force/torque assembly."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import rotor_aero
from .atmosphere import Ambient
from .constants import G_MARS, UP
from .rotor_aero import RotorFlowState, RotorParams

__all__ = [
    "VehicleConfig",
    "BodyState",
    "RotorCommand",
    "Wrench",
    "fuselage_drag",
    "total_wrench",
    "preset",
    "PRESET_NAMES",
]


@dataclass(frozen=True)
class VehicleConfig:
    """Rotorcraft mass, rotor and fuselage parameters."""

    gross_mass: float
    rotor: RotorParams
    fuselage_cd: float
    base_side: float
    inertia: np.ndarray

    def __post_init__(self):
        if self.gross_mass <= 0.0:
            raise ValueError("gross_mass must be positive")
        inertia = np.asarray(self.inertia, dtype=float)
        if inertia.shape != (3, 3):
            raise ValueError("inertia must be 3x3")
        if not np.allclose(inertia, inertia.T):
            raise ValueError("inertia must be symmetric")
        if np.any(np.linalg.eigvalsh(inertia) <= 0.0):
            raise ValueError("inertia must be positive definite")

    @property
    def base_area(self) -> float:
        return self.base_side**2

    @property
    def weight(self) -> float:
        return self.gross_mass * G_MARS


@dataclass
class BodyState:
    """Translational, attitude and rotor-speed state.

    ``rotor_axis`` is the unit thrust direction; ``omega`` the rotor
    angular rate (identical for both rotors).
    """

    position: np.ndarray
    velocity: np.ndarray
    rotor_axis: np.ndarray
    angular_rate: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omega: float = 0.0

    def copy(self) -> "BodyState":
        return BodyState(
            self.position.copy(),
            self.velocity.copy(),
            self.rotor_axis.copy(),
            self.angular_rate.copy(),
            self.omega,
        )


@dataclass(frozen=True)
class RotorCommand:
    """Commanded thrust-coefficient ratio, motor torque and attitude torque."""

    ct_sigma: float
    motor_torque: float = 0.0
    attitude_torque: np.ndarray = field(default_factory=lambda: np.zeros(3))


@dataclass(frozen=True)
class Wrench:
    """Total force/torque on the airframe plus rotor flow diagnostics."""

    force: np.ndarray
    torque: np.ndarray
    flow: RotorFlowState
    thrust: float
    aero_torque: float
    v_h: float
    ct_sigma_saturated: bool


def fuselage_drag(v_rel: np.ndarray, rho: float, config: VehicleConfig) -> np.ndarray:
    """Quadratic bluff-body drag opposing the flow-relative velocity."""
    speed = math.sqrt(float(v_rel @ v_rel))
    if speed == 0.0:
        return np.zeros(3)
    return -0.5 * config.fuselage_cd * rho * config.base_area * speed * v_rel


def total_wrench(
    state: BodyState,
    cmd: RotorCommand,
    ambient: Ambient,
    config: VehicleConfig,
    g_dir: np.ndarray | None = None,
) -> Wrench:
    """Assemble thrust, drag, gravity and rotor reaction torque.

    The flow-relative velocity is split into the axial component along
    ``rotor_axis`` (climb-positive) and the in-plane remainder.  The net
    rotor reaction torque on the airframe is (Q_M - Q) about the axis;
    the counter-rotating pair cancels the rest.
    """
    params = config.rotor
    rho = ambient.density
    axis = state.rotor_axis
    down = -UP if g_dir is None else np.asarray(g_dir, dtype=float)

    v_rel = state.velocity - ambient.wind
    v_z = float(v_rel @ axis)
    in_plane = v_rel - v_z * axis
    v_x = math.sqrt(float(in_plane @ in_plane))

    saturated = cmd.ct_sigma > params.ct_sigma_max or cmd.ct_sigma < 0.0
    ct_sigma = min(max(cmd.ct_sigma, 0.0), params.ct_sigma_max)
    t_total = rotor_aero.thrust(ct_sigma, params, rho, state.omega)
    v_h = rotor_aero.hover_induced_velocity(t_total, rho, params.disk_area)
    v_i = rotor_aero.induced_velocity(v_x, v_z, v_h, params)

    if state.omega > 0.0:
        tip = state.omega * params.radius
        mu = v_x / tip
        lam = (v_z + v_i) / tip
        flow = RotorFlowState(v_x, v_z, state.omega, v_i, mu, lam)
        q_aero = rotor_aero.torque(ct_sigma, flow, params, rho)
    else:
        flow = RotorFlowState(v_x, v_z, 0.0, v_i, 0.0, 0.0)
        q_aero = 0.0

    force = (
        t_total * axis
        + fuselage_drag(v_rel, rho, config)
        + config.gross_mass * G_MARS * down
    )
    torque3 = (cmd.motor_torque - q_aero) * axis + cmd.attitude_torque
    return Wrench(force, torque3, flow, t_total, q_aero, v_h, saturated)


def _rpm(rpm: float) -> float:
    return rpm * 2.0 * math.pi / 60.0


def _cube_inertia(mass: float, side: float) -> np.ndarray:
    return np.eye(3) * (mass * side**2 / 6.0)


# Aerodynamic constants shared by all presets (measured for the MAD
# design; applied uniformly in lieu of per-vehicle data).
_COMMON_AERO = dict(
    radius=0.605,
    mean_profile_drag=0.03,
    stall_ct_sigma=0.20,
    stall_exponent=20.0,
    vrs_instability_factor=1.0,
    induced_loss_factor=1.1,
    torque_max=4.41,
    collective_max=math.radians(21.0),
)

_PRESETS = {
    "ingenuity": dict(
        gross_mass=1.8,
        solidity=0.148,
        ct_sigma_design=0.10,
        ct_sigma_max=0.135,
        rpm=2575.0,
        blade_count=2,
    ),
    "advanced_mh": dict(
        gross_mass=4.6,
        solidity=0.248,
        ct_sigma_design=0.115,
        ct_sigma_max=0.135,
        rpm=2943.0,
        blade_count=4,
    ),
    "mad": dict(
        gross_mass=4.141,
        solidity=0.404,
        ct_sigma_design=0.095,
        ct_sigma_max=0.161,
        rpm=2882.0,
        blade_count=4,
    ),
}

PRESET_NAMES = tuple(_PRESETS)

_FUSELAGE_CD = 0.8
_BASE_SIDE = 0.14
# Only the MAD vehicle has a published rotor-speed ceiling; the others
# get a 10% margin over their design speed.
_MAD_OMEGA_MAX = 302.0


def preset(name: str) -> VehicleConfig:
    """Vehicle configuration presets: ingenuity, advanced_mh, mad."""
    try:
        entry = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    omega_design = _rpm(entry["rpm"])
    omega_max = _MAD_OMEGA_MAX if name == "mad" else 1.1 * omega_design
    rotor = RotorParams(
        solidity=entry["solidity"],
        ct_sigma_design=entry["ct_sigma_design"],
        ct_sigma_max=entry["ct_sigma_max"],
        omega_design=omega_design,
        omega_max=omega_max,
        blade_count=entry["blade_count"],
        **_COMMON_AERO,
    )
    return VehicleConfig(
        gross_mass=entry["gross_mass"],
        rotor=rotor,
        fuselage_cd=_FUSELAGE_CD,
        base_side=_BASE_SIDE,
        inertia=_cube_inertia(entry["gross_mass"], _BASE_SIDE),
    )
