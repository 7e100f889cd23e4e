"""Deterministic flight-dynamics simulator for mid-air deployment of a
coaxial Mars helicopter: entry, parachute descent, release and powered
deceleration to hover through vortex-ring-state aerodynamics."""

from .atmosphere import (
    AtmosphereModel,
    Ambient,
    ambient_at,
    builtin_exponential,
    load_profile,
)
from .control import (
    AlphaSchedule,
    PdAttitudeController,
    PiTorqueController,
    pd_step,
    pi_step,
    plan_alpha_schedule,
    predict_altitude_loss,
)
from .edl import (
    ChuteConfig,
    EntryConfig,
    SeparationModel,
    chute_terminal_velocity,
    mission_preset,
    separation_clearance,
    simulate_chute_descent,
    simulate_entry,
)
from .rotor_aero import (
    Regime,
    RotorFlowState,
    RotorParams,
    hover_induced_velocity,
    induced_velocity,
    thrust,
    torque,
    vrs_classify,
)
from .sim import MissionConfig, run_scenario, step
from .trajectory import TrajectoryLog, detect_event
from .vehicle import (
    BodyState,
    RotorCommand,
    VehicleConfig,
    fuselage_drag,
    preset,
    total_wrench,
)

__version__ = "0.1.0"
