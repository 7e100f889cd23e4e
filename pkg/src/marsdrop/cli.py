"""Command-line front end.

Subcommands run the entry, chute or full-deployment scenarios (plus a
VRS-map grid and a cross-mission comparison table) and emit reproducible
CSV/JSON artifacts for external plotting.

Exit codes: 0 success, 2 configuration error, 3 run incomplete, 4 I/O
error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import edl, rotor_aero
from .atmosphere import (
    AtmosphereError,
    ambient_at,
    builtin_exponential,
    load_profile,
)
from .edl import MISSION_NAMES, mission_preset
from .sim import MissionConfig, run_scenario
from .trajectory import EventNotFound, TrajectoryLog, detect_event
from .vehicle import PRESET_NAMES, preset

__all__ = ["main", "parse_args", "ConfigError"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INCOMPLETE = 3
EXIT_IO = 4

SUBCOMMANDS = ("entry", "chute", "deploy", "vrsmap", "compare")


class ConfigError(ValueError):
    """Invalid scenario configuration or override."""


# ---------------------------------------------------------------------------
# configuration assembly


def _default_config() -> dict:
    return {
        "preset": None,
        "atmosphere": {
            "surface_density": 0.0158,
            "scale_height": 11100.0,
            "temperature": 210.0,
            "profile": None,  # path to a CSV profile; overrides the above
        },
        "rotor": {"f": None, "k": None},
        "entry": {"dt": 0.05},
        "chute": {
            "start_altitude": None,  # default: release_altitude + 9000
            "start_speed": None,  # default: local terminal velocity
            "stop_altitude": 6000.0,
            "dt": 0.01,
        },
        "deploy": {
            "release_altitude": 6000.0,
            "release_speed": 30.0,
            "release_alpha_deg": 90.0,
            "guidance_mode": "fixed",
            "guidance_margin": 0.0,
            "spin_up_time": 5.0,
            "with_entry": False,
            "with_chute": False,
            "t_max": 120.0,
            "dt_entry": 0.05,
            "dt_chute": 0.01,
            "dt_released": 0.001,
            "log_interval": 0.01,
        },
        "vrsmap": {"vx_max": 3.0, "vz_max": 3.0, "step": 0.05},
    }


def _deep_update(base: dict, extra: dict) -> None:
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_update(base[key], value)
        else:
            base[key] = value


def _parse_override(text: str):
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not of the form key=value")
    key, _, raw = text.partition("=")
    if not key:
        raise ConfigError(f"override {text!r} has an empty key")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw  # bare strings need no quoting
    return key, value


def _apply_override(cfg: dict, key: str, value) -> None:
    node = cfg
    parts = key.split(".")
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"override {key!r} descends through scalar {part!r}")
        node = child
    node[parts[-1]] = value


def _load_config(args: argparse.Namespace) -> dict:
    cfg = _default_config()
    if getattr(args, "config", None) is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise ConfigError(f"config {args.config} must hold a JSON object")
        _deep_update(cfg, loaded)
    if getattr(args, "preset", None) is not None:
        cfg["preset"] = args.preset
    for text in args.set or []:
        key, value = _parse_override(text)
        _apply_override(cfg, key, value)
    return cfg


def _atmosphere(cfg: dict):
    section = cfg["atmosphere"]
    if section.get("profile"):
        try:
            text = Path(section["profile"]).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read profile {section['profile']}: {exc}")
        try:
            return load_profile(text)
        except AtmosphereError as exc:
            raise ConfigError(str(exc))
    try:
        return builtin_exponential(
            section["surface_density"], section["scale_height"], section["temperature"]
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad atmosphere parameters: {exc}")


def _rotor_params(cfg: dict, params):
    section = cfg["rotor"]
    updates = {}
    if section.get("f") is not None:
        updates["vrs_instability_factor"] = float(section["f"])
    if section.get("k") is not None:
        updates["induced_loss_factor"] = float(section["k"])
    return dataclasses.replace(params, **updates) if updates else params


def _vehicle(cfg: dict):
    name = cfg["preset"]
    if name not in PRESET_NAMES:
        raise ConfigError(f"vehicle preset must be one of {PRESET_NAMES}, got {name!r}")
    vehicle = preset(name)
    rotor = _rotor_params(cfg, vehicle.rotor)
    if rotor is not vehicle.rotor:
        vehicle = dataclasses.replace(vehicle, rotor=rotor)
    return vehicle


def _mission(cfg: dict):
    name = cfg["preset"]
    if name not in MISSION_NAMES:
        raise ConfigError(f"mission preset must be one of {MISSION_NAMES}, got {name!r}")
    return mission_preset(name)


# ---------------------------------------------------------------------------
# output emission


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _emit_log(out: Path, log: TrajectoryLog, summary: dict) -> None:
    _write_csv(out / "trajectory.csv", log.columns, log.rows)
    _write_json(
        out / "events.json",
        {"status": log.status, "events": [{"t_s": t, "name": n} for t, n in log.events]},
    )
    summary = dict(summary)
    summary["status"] = log.status
    _write_json(out / "summary.json", summary)


def _interp_at(log: TrajectoryLog, t: float, column: str) -> float:
    times = log.times
    values = log.column(column)
    return float(np.interp(t, times, values))


def _mach2_altitude(log: TrajectoryLog) -> float | None:
    try:
        t = detect_event(log, "mach", 2.0)
    except EventNotFound:
        return None
    return _interp_at(log, t, "altitude_m")


# ---------------------------------------------------------------------------
# subcommand runners


def _run_entry(cfg: dict, out: Path) -> int:
    mission = _mission(cfg)
    atm = _atmosphere(cfg)
    log = edl.simulate_entry(mission.entry, atm, cfg["entry"]["dt"])
    summary = {
        "mission": mission.name,
        "entry_mass_kg": mission.entry.entry_mass,
        "ballistic_coefficient_kgm2": mission.entry.ballistic_coefficient,
        "mach2_altitude_m": _mach2_altitude(log),
        "final_speed_ms": log.last("speed_ms"),
    }
    _emit_log(out, log, summary)
    return EXIT_OK if log.status == "ok" else EXIT_INCOMPLETE


def _run_chute(cfg: dict, out: Path) -> int:
    mission = _mission(cfg)
    atm = _atmosphere(cfg)
    section = cfg["chute"]
    stop = section["stop_altitude"]
    start = section["start_altitude"]
    if start is None:
        start = stop + 9000.0
    speed = section["start_speed"]
    if speed is None:
        speed = edl.chute_terminal_velocity(
            mission.chute, ambient_at(atm, start).density
        )
    log = edl.simulate_chute_descent(
        mission.chute, atm, start, speed, stop_altitude=stop, dt=section["dt"]
    )
    rho_stop = ambient_at(atm, stop).density
    summary = {
        "mission": mission.name,
        "terminal_velocity_ms": edl.chute_terminal_velocity(mission.chute, rho_stop),
        "terminal_velocity_sim_ms": log.last("speed_ms"),
        "release_altitude_m": stop,
    }
    _emit_log(out, log, summary)
    return EXIT_OK if log.status == "ok" else EXIT_INCOMPLETE


def _run_deploy(cfg: dict, out: Path) -> int:
    vehicle = _vehicle(cfg)
    atm = _atmosphere(cfg)
    section = cfg["deploy"]
    mission_name = cfg["preset"] if cfg["preset"] in MISSION_NAMES else "mad"
    mission = mission_preset(mission_name)
    try:
        mission_cfg = MissionConfig(
            vehicle=vehicle,
            atmosphere=atm,
            entry=mission.entry if section["with_entry"] else None,
            chute=mission.chute if section["with_chute"] else None,
            release_altitude=section["release_altitude"],
            release_speed=section["release_speed"],
            release_alpha=math.radians(section["release_alpha_deg"]),
            spin_up_time=section["spin_up_time"],
            guidance_mode=section["guidance_mode"],
            guidance_margin=section["guidance_margin"],
            t_max=section["t_max"],
            dt_entry=section["dt_entry"],
            dt_chute=section["dt_chute"],
            dt_released=section["dt_released"],
            log_interval=section["log_interval"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc))
    log = run_scenario(mission_cfg)

    release_t = None
    hover_t = None
    for t, name in log.events:
        if name == "release":
            release_t = t
        elif name == "hover":
            hover_t = t
    released = [
        row for row in log.rows if row[log.columns.index("phase")] == "released"
    ]
    i_alt = log.columns.index("altitude_m")
    i_speed = log.columns.index("speed_ms")
    i_sev = log.columns.index("severity")
    summary = {
        "terminal_velocity_ms": released[0][i_speed] if released else None,
        "mach2_altitude_m": _mach2_altitude(log) if section["with_entry"] else None,
        "release_altitude_m": released[0][i_alt] if released else None,
        "hover_elevation_m": released[-1][i_alt] if hover_t is not None else None,
        "altitude_loss_to_hover_m": (
            released[0][i_alt] - released[-1][i_alt] if hover_t is not None else None
        ),
        "peak_severity": max((row[i_sev] for row in released), default=0.0),
        "release_t_s": release_t,
        "hover_t_s": hover_t,
    }
    _emit_log(out, log, summary)
    return EXIT_OK if log.status == "ok" else EXIT_INCOMPLETE


def _run_vrsmap(cfg: dict, out: Path) -> int:
    vehicle = _vehicle(cfg)
    params = vehicle.rotor
    section = cfg["vrsmap"]
    step = float(section["step"])
    if step <= 0.0:
        raise ConfigError("vrsmap.step must be positive")
    nx = int(round(section["vx_max"] / step))
    nz = int(round(section["vz_max"] / step))
    rows = []
    for i in range(nx + 1):
        vx = i * step
        for j in range(nz + 1):
            vzd = j * step  # descent-positive
            ratio = params.induced_loss_factor * rotor_aero.ideal_inflow_ratio(
                vx, -vzd, params.vrs_instability_factor
            )
            res = rotor_aero.vrs_classify(vx, vzd, params)
            rows.append((vx, vzd, ratio, res.regime.value, res.severity))
    _write_csv(
        out / "vrsmap.csv",
        ["vx_bar", "vz_bar_descent_positive", "vi_over_vh", "regime", "severity"],
        rows,
    )
    return EXIT_OK


_COMPARE_COLUMNS = [
    "mission",
    "entry_mass_kg",
    "entry_velocity_ms",
    "entry_fpa_deg",
    "heatshield_mass_kg",
    "backshell_chute_mass_kg",
    "landed_mass_kg",
    "ballistic_coefficient_kgm2",
    "mach2_altitude_m",
    "terminal_velocity_table_ms",
    "terminal_velocity_model_ms",
]


def _run_compare(cfg: dict, out: Path) -> int:
    atm = _atmosphere(cfg)
    rows = []
    incomplete = False
    for name in MISSION_NAMES:
        mission = mission_preset(name)
        log = edl.simulate_entry(mission.entry, atm, cfg["entry"]["dt"])
        incomplete = incomplete or log.status != "ok"
        # legacy landers ride the chute to the surface; MAD releases high
        ref_altitude = 6000.0 if name == "mad" else 0.0
        vt = edl.chute_terminal_velocity(
            mission.chute, ambient_at(atm, ref_altitude).density
        )
        rows.append(
            (
                name,
                mission.entry.entry_mass,
                mission.entry.entry_velocity,
                math.degrees(mission.entry.flight_path_angle),
                mission.heatshield_mass,
                mission.backshell_chute_mass,
                mission.landed_mass,
                mission.entry.ballistic_coefficient,
                _mach2_altitude(log),
                mission.terminal_velocity_table,
                vt,
            )
        )
    _write_csv(out / "compare.csv", _COMPARE_COLUMNS, rows)
    return EXIT_INCOMPLETE if incomplete else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and entry point


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="marsdrop",
        description="Mid-air deployment flight-dynamics simulator",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, needs_source in (
        ("entry", True),
        ("chute", True),
        ("deploy", True),
        ("vrsmap", True),
        ("compare", False),
    ):
        p = sub.add_parser(name)
        if needs_source:
            group = p.add_mutually_exclusive_group(required=False)
            group.add_argument("--config", help="JSON scenario file")
            group.add_argument("--preset", help="built-in scenario name")
        p.add_argument(
            "--out",
            default=None,
            help="output directory (default: $MARSDROP_OUT or '.')",
        )
        p.add_argument(
            "--set",
            action="append",
            metavar="KEY=VALUE",
            help="dotted-path config override, JSON-parsed value",
        )
    return parser.parse_args(argv)


_RUNNERS = {
    "entry": _run_entry,
    "chute": _run_chute,
    "deploy": _run_deploy,
    "vrsmap": _run_vrsmap,
    "compare": _run_compare,
}


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.subcommand != "compare":
            if getattr(args, "config", None) is None and args.preset is None:
                raise ConfigError("exactly one of --config/--preset is required")
            if cfg.get("preset") is None:
                raise ConfigError("config must name a preset")
    except ConfigError as exc:
        print(f"marsdrop: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out or os.environ.get("MARSDROP_OUT", "."))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"marsdrop: cannot create {out}: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        return _RUNNERS[args.subcommand](cfg, out)
    except ConfigError as exc:
        print(f"marsdrop: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        path = getattr(exc, "filename", None) or out
        print(f"marsdrop: I/O error at {path}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
