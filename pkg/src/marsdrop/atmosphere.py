"""Altitude-indexed Mars atmosphere models.

Two flavours are supported: a built-in isothermal exponential profile
(analytic, infinite-resolution) and tabulated profiles loaded from CSV.
Both are queried through :func:`ambient_at`, which returns density,
temperature, speed of sound and wind at a given MOLA altitude.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .constants import CO2_GAMMA, CO2_GAS_CONSTANT

__all__ = [
    "Ambient",
    "AtmosphereModel",
    "AtmosphereError",
    "builtin_exponential",
    "ambient_at",
    "load_profile",
]

# Default calibration of the built-in profile: 0.0158 kg/m^3 at 0 km MOLA
# with an 11.1 km scale height puts ~0.0092 kg/m^3 at 6 km MOLA.
DEFAULT_SURFACE_DENSITY = 0.0158
DEFAULT_SCALE_HEIGHT = 11100.0
DEFAULT_TEMPERATURE = 210.0

# Altitude span over which the analytic exponential model is considered
# nominal; queries outside are flagged as extrapolated.
_EXP_SPAN = (-10_000.0, 300_000.0)


class AtmosphereError(ValueError):
    """Invalid atmosphere construction or query."""


@dataclass(frozen=True)
class Ambient:
    """Local atmospheric state at a query altitude."""

    density: float
    temperature: float
    sound_speed: float
    wind: np.ndarray
    extrapolated: bool = False


@dataclass(frozen=True)
class AtmosphereModel:
    """Altitude profile of density, temperature and wind.

    ``altitudes`` are strictly increasing MOLA altitudes [m].  When
    ``exp_surface_density``/``exp_scale_height`` are set the model is the
    analytic isothermal exponential and the tabulated arrays only define
    the nominal span.
    """

    altitudes: np.ndarray
    densities: np.ndarray
    temperatures: np.ndarray
    winds: np.ndarray
    gas_gamma: float = CO2_GAMMA
    gas_constant: float = CO2_GAS_CONSTANT
    exp_surface_density: float | None = None
    exp_scale_height: float | None = None

    def __post_init__(self):
        alts = np.asarray(self.altitudes, dtype=float)
        if alts.size < 2:
            raise AtmosphereError("profile needs at least two altitude nodes")
        if np.any(np.diff(alts) <= 0.0):
            raise AtmosphereError("altitudes must be strictly increasing")
        if np.any(np.asarray(self.densities) <= 0.0):
            raise AtmosphereError("densities must be strictly positive")
        if np.any(np.asarray(self.temperatures) <= 0.0):
            raise AtmosphereError("temperatures must be strictly positive")

    @property
    def span(self) -> tuple[float, float]:
        return float(self.altitudes[0]), float(self.altitudes[-1])


def builtin_exponential(
    surface_density: float = DEFAULT_SURFACE_DENSITY,
    scale_height: float = DEFAULT_SCALE_HEIGHT,
    temperature: float = DEFAULT_TEMPERATURE,
) -> AtmosphereModel:
    """Isothermal exponential atmosphere: rho(h) = rho0 exp(-h/H), no wind."""
    if surface_density <= 0.0:
        raise AtmosphereError("surface_density must be positive")
    if scale_height <= 0.0:
        raise AtmosphereError("scale_height must be positive")
    if temperature <= 0.0:
        raise AtmosphereError("temperature must be positive")
    alts = np.array(_EXP_SPAN)
    rhos = surface_density * np.exp(-alts / scale_height)
    return AtmosphereModel(
        altitudes=alts,
        densities=rhos,
        temperatures=np.full(2, temperature),
        winds=np.zeros((2, 3)),
        exp_surface_density=surface_density,
        exp_scale_height=scale_height,
    )


def ambient_at(model: AtmosphereModel, h: float) -> Ambient:
    """Evaluate the atmosphere at altitude ``h`` [m MOLA].

    Tabulated profiles are interpolated linearly; queries outside the span
    continue the end segment value and set ``extrapolated``.
    """
    lo, hi = model.span
    extrapolated = h < lo or h > hi
    if model.exp_surface_density is not None:
        rho = model.exp_surface_density * math.exp(-h / model.exp_scale_height)
        temp = float(model.temperatures[0])
        wind = np.zeros(3)
    else:
        alts = model.altitudes
        rho = float(np.interp(h, alts, model.densities))
        temp = float(np.interp(h, alts, model.temperatures))
        wind = np.array(
            [np.interp(h, alts, model.winds[:, i]) for i in range(3)]
        )
    a = math.sqrt(model.gas_gamma * model.gas_constant * temp)
    return Ambient(rho, temp, a, wind, extrapolated)


_REQUIRED_COLUMNS = ("altitude_m", "density_kgm3", "temperature_K")
_WIND_COLUMNS = ("wind_east_ms", "wind_north_ms", "wind_up_ms")


def load_profile(table: str) -> AtmosphereModel:
    """Parse a CSV atmosphere profile.

    Expected header: ``altitude_m,density_kgm3,temperature_K`` with the
    optional wind triple appended.  Lines starting with ``#`` are ignored.
    """
    lines = [
        ln.strip()
        for ln in io.StringIO(table)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise AtmosphereError("empty profile")
    header = [c.strip() for c in lines[0].split(",")]
    for col in _REQUIRED_COLUMNS:
        if col not in header:
            raise AtmosphereError(f"missing required column {col!r}")
    has_wind = all(c in header for c in _WIND_COLUMNS)
    idx = {c: header.index(c) for c in header}

    rows = []
    for ln in lines[1:]:
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != len(header):
            raise AtmosphereError(f"row has {len(cells)} cells, expected {len(header)}")
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise AtmosphereError(f"non-numeric cell in row {ln!r}") from exc
        rows.append(values)
    if len(rows) < 2:
        raise AtmosphereError("profile needs at least two rows")

    rows.sort(key=lambda r: r[idx["altitude_m"]])
    alts = np.array([r[idx["altitude_m"]] for r in rows])
    if np.any(np.diff(alts) == 0.0):
        raise AtmosphereError("duplicate altitudes in profile")
    rhos = np.array([r[idx["density_kgm3"]] for r in rows])
    temps = np.array([r[idx["temperature_K"]] for r in rows])
    if has_wind:
        winds = np.array([[r[idx[c]] for c in _WIND_COLUMNS] for r in rows])
    else:
        winds = np.zeros((len(rows), 3))
    return AtmosphereModel(alts, rhos, temps, winds)
