"""
bohmsim/models/event.py
Spacetime points. Fields may be floats or broadcastable numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bohmsim.errors import InvalidParameter
from bohmsim.types import FloatOrArray


def _check_finite(name: str, value: FloatOrArray) -> None:
    if not np.all(np.isfinite(value)):
        raise InvalidParameter(f"{name} must be finite")


@dataclass(frozen=True)
class Event:
    t: FloatOrArray
    x: FloatOrArray

    def __post_init__(self) -> None:
        _check_finite("Event.t", self.t)
        _check_finite("Event.x", self.x)

    @property
    def u(self) -> FloatOrArray:
        """Lightcone coordinate t - x (a right-mover depends on u only)."""
        return self.t - self.x

    @property
    def v(self) -> FloatOrArray:
        """Lightcone coordinate t + x."""
        return self.t + self.x

    def interval(self) -> FloatOrArray:
        return self.t * self.t - self.x * self.x


@dataclass(frozen=True)
class MultiPoint:
    """Multitime argument (X1, X2): one event per particle."""

    e1: Event
    e2: Event

    @classmethod
    def of(cls, t1: FloatOrArray, x1: FloatOrArray, t2: FloatOrArray, x2: FloatOrArray) -> "MultiPoint":
        return cls(Event(t1, x1), Event(t2, x2))

    def swapped(self) -> "MultiPoint":
        return MultiPoint(self.e2, self.e1)

    @property
    def is_equal_time(self) -> bool:
        return bool(np.all(np.asarray(self.e1.t) == np.asarray(self.e2.t)))


@dataclass(frozen=True)
class EqualTimePoint:
    """Postselection point (t, x1, x2) on a single timeslice."""

    t: FloatOrArray
    x1: FloatOrArray
    x2: FloatOrArray

    def __post_init__(self) -> None:
        _check_finite("EqualTimePoint.t", self.t)
        _check_finite("EqualTimePoint.x1", self.x1)
        _check_finite("EqualTimePoint.x2", self.x2)

    def to_multipoint(self) -> MultiPoint:
        return MultiPoint(Event(self.t, self.x1), Event(self.t, self.x2))

    def swapped(self) -> "EqualTimePoint":
        return EqualTimePoint(self.t, self.x2, self.x1)

    def mirrored(self) -> "EqualTimePoint":
        """Parity composed with exchange: (t, x1, x2) -> (t, -x2, -x1)."""
        return EqualTimePoint(self.t, -self.x2, -self.x1)
