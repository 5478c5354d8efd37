"""Piecewise-linear year schedules used for time-varying parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping


@dataclass(frozen=True)
class Schedule:
    """Anchor points ``{year: value}`` interpolated linearly between anchors.

    Before the first anchor the schedule returns ``pre_value`` when set,
    otherwise the first anchor value; after the last anchor it stays constant.
    """

    anchors: tuple[tuple[int, float], ...]
    pre_value: float | None = None

    def __post_init__(self):
        years = [y for y, _ in self.anchors]
        if not years:
            raise ValueError("schedule needs at least one anchor")
        if years != sorted(years) or len(set(years)) != len(years):
            raise ValueError("anchor years must be strictly increasing")

    @classmethod
    def from_mapping(cls, data: Mapping, pre_value: float | None = None) -> "Schedule":
        """Build from ``{year: value}`` or ``{"anchors": {...}, "pre": v}``."""
        if "anchors" in data:
            pre_value = data.get("pre", pre_value)
            data = data["anchors"]
        anchors = tuple(sorted((int(y), float(v)) for y, v in data.items()))
        return cls(anchors, pre_value)


def schedule_value(schedule: Schedule | Mapping, year: int | float) -> float:
    """Evaluate a schedule at ``year`` (linear interpolation between anchors)."""
    if not isinstance(schedule, Schedule):
        schedule = Schedule.from_mapping(schedule)
    anchors = schedule.anchors
    if year < anchors[0][0]:
        return schedule.pre_value if schedule.pre_value is not None else anchors[0][1]
    if year >= anchors[-1][0]:
        return anchors[-1][1]
    for (y0, v0), (y1, v1) in zip(anchors, anchors[1:]):
        if y0 <= year <= y1:
            frac = (year - y0) / (y1 - y0)
            return v0 + frac * (v1 - v0)
    raise AssertionError("unreachable")


def resolve(value, year: int | float) -> float:
    """Resolve a scalar-or-schedule document value at ``year``."""
    if isinstance(value, Mapping):
        return schedule_value(Schedule.from_mapping(value), year)
    return float(value)
