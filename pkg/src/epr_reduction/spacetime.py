"""Minkowski geometry in natural units (c = 1), signature (+, -, -, -).

Events are immutable labelled points.  Everything here is a pure function;
the only tolerance is ``LIGHTLIKE_TOL``, an absolute bound on the squared
interval below which two events count as light-separated.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import DuplicateLabelError, SpeedLimitError

LIGHTLIKE_TOL = 1e-9
MAX_SPEED = 1.0 - 1e-12
_ZERO_SPEED = 1e-15


@dataclass(frozen=True)
class Event:
    label: str
    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"event {self.label!r}: coordinate {name} is not finite")
            object.__setattr__(self, name, value)

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def coords(self) -> tuple[float, float, float, float]:
        return (self.t, self.x, self.y, self.z)


@dataclass(frozen=True)
class Velocity:
    """Frame velocity as a fraction of light speed."""

    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0

    def __post_init__(self):
        for name in ("vx", "vy", "vz"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.speed <= MAX_SPEED:
            raise SpeedLimitError(f"|v| = {self.speed!r} is not below light speed")

    @classmethod
    def along(cls, direction, speed: float) -> "Velocity":
        d = np.asarray(direction, dtype=float)
        return cls(*(speed * d / np.linalg.norm(d)))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vz])

    @property
    def speed(self) -> float:
        return math.sqrt(self.vx**2 + self.vy**2 + self.vz**2)

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.speed**2)

    def __neg__(self) -> "Velocity":
        return Velocity(-self.vx, -self.vy, -self.vz)


class IntervalClass(enum.Enum):
    TIMELIKE = "Timelike"
    SPACELIKE = "Spacelike"
    LIGHTLIKE = "Lightlike"


def interval_squared(a: Event, b: Event) -> float:
    dt, dx, dy, dz = b.t - a.t, b.x - a.x, b.y - a.y, b.z - a.z
    return dt * dt - dx * dx - dy * dy - dz * dz


def classify(a: Event, b: Event) -> IntervalClass:
    s2 = interval_squared(a, b)
    if s2 > LIGHTLIKE_TOL:
        return IntervalClass.TIMELIKE
    if s2 < -LIGHTLIKE_TOL:
        return IntervalClass.SPACELIKE
    return IntervalClass.LIGHTLIKE


def in_forward_lightcone(a: Event, b: Event) -> bool:
    """True if ``b`` lies in the closed future lightcone of ``a``."""
    return b.t >= a.t and interval_squared(a, b) >= -LIGHTLIKE_TOL


def boost(e: Event, v: Velocity) -> Event:
    """Coordinates of ``e`` seen from a frame moving with velocity ``v``."""
    speed = v.speed
    if speed >= 1.0:
        raise SpeedLimitError(f"|v| = {speed!r}")
    if speed < _ZERO_SPEED:
        return e
    gamma = v.gamma
    vec = v.vector
    pos = e.position
    v_dot_x = float(vec @ pos)
    t_new = gamma * (e.t - v_dot_x)
    pos_new = pos + ((gamma - 1.0) * v_dot_x / speed**2 - gamma * e.t) * vec
    return Event(e.label, t_new, *pos_new)


def order_reversing_frame(a: Event, b: Event) -> Optional[Velocity]:
    """A frame in which the time order of spacelike events ``a``, ``b`` flips.

    Returns None for timelike or lightlike pairs, whose order is invariant.
    When the lab times coincide the returned frame (speed 0.5 along the
    separation) puts ``b`` first.
    """
    if classify(a, b) is not IntervalClass.SPACELIKE:
        return None
    dt = b.t - a.t
    dx = b.position - a.position
    if dt == 0.0:
        return Velocity.along(dx, 0.5)
    speed = (abs(dt) / float(np.linalg.norm(dx)) + 1.0) / 2.0
    # boosted dt is gamma*(dt - v.dx); pointing v along sign(dt)*dx makes it change sign
    return Velocity.along(math.copysign(1.0, dt) * dx, speed)


def _check_unique(events: Iterable[Event]) -> list[Event]:
    events = list(events)
    seen: set[str] = set()
    for e in events:
        if e.label in seen:
            raise DuplicateLabelError(f"duplicate event label {e.label!r}")
        seen.add(e.label)
    return events


def causal_partial_order(events: Iterable[Event]) -> set[tuple[str, str]]:
    """All label pairs ``(a, b)`` with ``b`` in the closed forward cone of ``a``."""
    events = _check_unique(events)
    return {
        (a.label, b.label)
        for a in events
        for b in events
        if a.label != b.label and in_forward_lightcone(a, b)
    }
