"""Trajectory logging and event detection shared by all phases."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["TrajectoryLog", "EventNotFound", "detect_event"]


class EventNotFound(ValueError):
    """Requested trigger never crosses within the logged span."""


@dataclass
class TrajectoryLog:
    """Column-oriented time history with named events.

    ``columns`` fixes the row schema; rows are tuples in that order.
    ``events`` holds (time, name) pairs; ``status`` is "ok",
    "incomplete" or a failure tag.
    """

    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    events: list[tuple[float, str]] = field(default_factory=list)
    status: str = "ok"

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError("row width does not match columns")
        self.rows.append(values)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def last(self, name: str):
        return self.rows[-1][self.columns.index(name)]

    def event_time(self, name: str) -> float:
        for t, tag in self.events:
            if tag == name:
                return t
        raise EventNotFound(f"no event named {name!r}")

    @property
    def times(self) -> list[float]:
        return self.column(self.columns[0])


_TRIGGER_COLUMNS = {
    "mach": "mach",
    "altitude": "altitude_m",
    "speed": "speed_ms",
}


def detect_event(log: TrajectoryLog, kind: str, threshold: float) -> float:
    """Linear-interpolated first crossing time of a logged quantity.

    ``kind`` is one of mach/altitude/speed.  Raises
    :class:`EventNotFound` when the trajectory never crosses.
    """
    try:
        column = _TRIGGER_COLUMNS[kind]
    except KeyError:
        raise ValueError(f"unknown trigger kind {kind!r}")
    values = log.column(column)
    times = log.times
    for i in range(len(values) - 1):
        a, b = values[i] - threshold, values[i + 1] - threshold
        if a == 0.0:
            return times[i]
        if a * b < 0.0:
            frac = a / (a - b)
            return times[i] + frac * (times[i + 1] - times[i])
    if values and values[-1] == threshold:
        return times[-1]
    raise EventNotFound(f"{kind} never crosses {threshold}")
