"""Actuator-disk rotor aerodynamics for the coaxial pair.

The two counter-rotating rotors are modeled as a single actuator disk;
thrust and torque values returned here are two-rotor totals.  Induced
velocity follows momentum theory in climb and in the windmill-brake
state, with a smooth continuation across the vertical-descent band where
momentum theory is singular.  The continuation is a cubic Hermite bridge
plus an instability bump (scaled by the ``f`` factor) peaking near
Vz = -v_h, which reproduces the characteristic detachment from the
momentum curve inside the vortex-ring-state (VRS) region.

Sign convention: ``v_z`` is climb-positive everywhere in this module,
except for :func:`vrs_classify` whose ``vz_bar`` input is
descent-positive to match the usual normalized-velocity regime charts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "Regime",
    "RotorParams",
    "RotorFlowState",
    "RegimeResult",
    "hover_induced_velocity",
    "thrust",
    "induced_velocity",
    "ideal_inflow_ratio",
    "baseline_inflow_ratio",
    "vrs_excess_ratio",
    "torque",
    "torque_coefficient",
    "vrs_classify",
]

# Amplitude of the VRS bump in units of v_h (at f=1, V_x=0, V_z=-v_h).
VRS_BUMP_AMPLITUDE = 0.35
# Relative excess over the bridged baseline that marks the VRS region.
VRS_EXCESS_THRESHOLD = 0.05
# Cap on |d(v_i/v_h)/d(V_z/v_h)| used at the bridge endpoints, where the
# windmill-side momentum slope diverges.
_BRIDGE_SLOPE_CAP = 2.0


class Regime(str, enum.Enum):
    NORMAL = "normal"
    VRS = "vrs"
    WINDMILL = "windmill"


@dataclass(frozen=True)
class RotorParams:
    """Geometry and aerodynamic constants of the coaxial rotor system."""

    radius: float
    solidity: float
    mean_profile_drag: float
    stall_ct_sigma: float
    stall_exponent: float
    vrs_instability_factor: float
    induced_loss_factor: float
    omega_max: float
    torque_max: float
    collective_max: float
    ct_sigma_design: float
    ct_sigma_max: float
    omega_design: float
    blade_count: int = 4
    blade_mass: float = 0.070

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")
        if not 0.0 < self.solidity < 1.0:
            raise ValueError("solidity must be in (0, 1)")
        if self.stall_exponent <= 0.0:
            raise ValueError("stall_exponent must be positive")
        if self.induced_loss_factor < 1.0:
            raise ValueError("induced_loss_factor must be >= 1")
        if not 0.0 <= self.vrs_instability_factor <= 1.0:
            raise ValueError("vrs_instability_factor must be in [0, 1]")
        if self.omega_max <= 0.0 or self.torque_max <= 0.0:
            raise ValueError("omega_max and torque_max must be positive")

    @property
    def disk_area(self) -> float:
        return math.pi * self.radius**2

    @property
    def rotor_inertia(self) -> float:
        """Polar inertia of one rotor, blades as uniform rods."""
        return self.blade_count * self.blade_mass * self.radius**2 / 3.0


@dataclass(frozen=True)
class RotorFlowState:
    """Flow through the disk: in-plane and axial (climb-positive) speeds."""

    v_x: float
    v_z: float
    omega: float
    v_i: float
    mu: float
    lam: float


@dataclass(frozen=True)
class RegimeResult:
    regime: Regime
    severity: float


def hover_induced_velocity(thrust_total: float, rho: float, area: float) -> float:
    """Ideal hover induced velocity v_h = sqrt(T / (2 rho A))."""
    if thrust_total < 0.0:
        raise ValueError("thrust must be non-negative")
    if rho <= 0.0 or area <= 0.0:
        raise ValueError("rho and area must be positive")
    return math.sqrt(thrust_total / (2.0 * rho * area))


def thrust(ct_sigma: float, params: RotorParams, rho: float, omega: float) -> float:
    """Two-rotor total thrust T = C_T rho A (Omega R)^2.

    ``ct_sigma`` is clipped to [0, ct_sigma_max]; callers detect
    saturation by comparing the request against the limit.
    """
    if omega < 0.0:
        raise ValueError("omega must be non-negative")
    ct = min(max(ct_sigma, 0.0), params.ct_sigma_max) * params.solidity
    tip = omega * params.radius
    return ct * rho * params.disk_area * tip * tip


def _momentum_root(vx: float, vz: float) -> float:
    """Solve vbar^2 (vx^2 + (vz + vbar)^2) = 1 on the physical branch.

    Valid for vz >= 0 (normal working state) and vz <= -2 (windmill
    brake); in both cases the root lies in (0, 1].  Safeguarded Newton.
    """
    q = vx * vx
    lo, hi = 0.0, 1.0
    f_hi = q + (vz + 1.0) ** 2 - 1.0
    if f_hi <= 0.0:
        # only at the band corners (vx=0, vz=0 or vz=-2) where the root is 1
        return 1.0
    v = 0.5
    f_lo = -1.0
    for _ in range(200):
        w = vz + v
        f = v * v * (q + w * w) - 1.0
        if abs(f) < 1e-15:
            return v
        if f > 0.0:
            hi = v
        else:
            lo = v
        df = 2.0 * v * (q + w * w) + 2.0 * v * v * w
        step_ok = df != 0.0
        if step_ok:
            vn = v - f / df
            step_ok = lo < vn < hi
        v = vn if step_ok else 0.5 * (lo + hi)
        if hi - lo < 1e-16:
            break
    return v


def _momentum_slope(vx: float, vz: float, vbar: float) -> float:
    """d(vbar)/d(vz) by implicit differentiation, clamped near the
    singular windmill boundary."""
    q = vx * vx
    w = vz + vbar
    dfdv = 2.0 * vbar * (q + w * w) + 2.0 * vbar * vbar * w
    dfdz = 2.0 * vbar * vbar * w
    if abs(dfdv) < 1e-12:
        return _BRIDGE_SLOPE_CAP
    slope = -dfdz / dfdv
    return min(max(slope, -_BRIDGE_SLOPE_CAP), _BRIDGE_SLOPE_CAP)


def baseline_inflow_ratio(vx_bar: float, vz_bar: float) -> float:
    """Momentum-theory inflow with the VRS bump suppressed (f = 0).

    Equals momentum theory for vz_bar >= 0 or <= -2 and the Hermite
    bridge continuation inside the band; continuous everywhere.
    """
    if vz_bar >= 0.0 or vz_bar <= -2.0:
        if vx_bar == 0.0 and vz_bar == 0.0:
            return 1.0
        return _momentum_root(vx_bar, vz_bar)
    p0 = _momentum_root(vx_bar, -2.0)
    m0 = _momentum_slope(vx_bar, -2.0, p0)
    p1 = 1.0 if vx_bar == 0.0 else _momentum_root(vx_bar, 0.0)
    m1 = _momentum_slope(vx_bar, 0.0, p1)
    t = (vz_bar + 2.0) / 2.0
    h00 = (1.0 + 2.0 * t) * (1.0 - t) ** 2
    h10 = t * (1.0 - t) ** 2
    h01 = t * t * (3.0 - 2.0 * t)
    h11 = t * t * (t - 1.0)
    return h00 * p0 + 2.0 * h10 * m0 + h01 * p1 + 2.0 * h11 * m1


def _bump(vx_bar: float, vz_bar: float) -> float:
    """Unit-f VRS excess bump; vz_bar climb-positive, nonzero only inside
    the bridge band and for |vx_bar| < 1."""
    if not -2.0 < vz_bar < 0.0:
        return 0.0
    taper = 1.0 - abs(vx_bar)
    if taper <= 0.0:
        return 0.0
    s = math.sin(-0.5 * math.pi * vz_bar)
    return VRS_BUMP_AMPLITUDE * s * s * taper


def ideal_inflow_ratio(vx_bar: float, vz_bar: float, f: float) -> float:
    """Normalized induced velocity v_ideal/v_h before the k loss factor."""
    return baseline_inflow_ratio(vx_bar, vz_bar) + f * _bump(vx_bar, vz_bar)


def induced_velocity(v_x: float, v_z: float, v_h: float, params: RotorParams) -> float:
    """Induced velocity v_i = k * v_ideal(V_x, V_z, v_h) >= 0."""
    if v_h < 0.0:
        raise ValueError("v_h must be non-negative")
    if v_h == 0.0:
        return 0.0
    vbar = ideal_inflow_ratio(abs(v_x) / v_h, v_z / v_h, params.vrs_instability_factor)
    return params.induced_loss_factor * vbar * v_h


def vrs_excess_ratio(vx_bar: float, vz_bar_descent: float, params: RotorParams) -> float:
    """Excess of the bridged inflow over the baseline, in units of v_h.

    Descent-positive ``vz_bar_descent`` to match the regime charts.
    """
    return params.vrs_instability_factor * _bump(abs(vx_bar), -vz_bar_descent)


def vrs_classify(vx_bar: float, vz_bar_descent: float, params: RotorParams) -> RegimeResult:
    """Classify a normalized rotor-aligned velocity point.

    ``vz_bar_descent`` is positive in descent.  Severity is the excess
    bump normalized to its peak amplitude, clipped to [0, 1].
    """
    if vz_bar_descent >= 2.0:
        return RegimeResult(Regime.WINDMILL, 0.0)
    excess = vrs_excess_ratio(vx_bar, vz_bar_descent, params)
    severity = min(excess / VRS_BUMP_AMPLITUDE, 1.0)
    if excess > VRS_EXCESS_THRESHOLD:
        return RegimeResult(Regime.VRS, severity)
    return RegimeResult(Regime.NORMAL, severity)


def torque_coefficient(ct_sigma: float, mu: float, lam: float, params: RotorParams) -> float:
    """Torque coefficient from profile drag, stall penalty and induced power."""
    sigma = params.solidity
    ct = ct_sigma * sigma
    stall = (ct_sigma / params.stall_ct_sigma) ** params.stall_exponent
    profile = (params.mean_profile_drag * sigma / 8.0) * (
        1.0 + (6.0 * ct_sigma) ** 2 + stall
    ) * (1.0 + 4.6 * mu * mu)
    return profile + ct * lam


def torque(ct_sigma: float, flow: RotorFlowState, params: RotorParams, rho: float) -> float:
    """Two-rotor total aerodynamic torque Q = C_Q rho A R (Omega R)^2."""
    if flow.omega <= 0.0:
        raise ValueError("omega must be positive")
    ct_sigma = min(max(ct_sigma, 0.0), params.ct_sigma_max)
    cq = torque_coefficient(ct_sigma, flow.mu, flow.lam, params)
    tip = flow.omega * params.radius
    return cq * rho * params.disk_area * params.radius * tip * tip
