"""
bohmsim/physics/fields.py
Velocity fields on equal timeslices, the common interface the trajectory
engine, the samplers and the CLI integrate against.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod

import numpy as np

from bohmsim.errors import InvalidParameter
from bohmsim.models.event import EqualTimePoint, MultiPoint
from bohmsim.models.packet import Direction, Packet, TwoPhotonConfig
from bohmsim.physics import paraxial
from bohmsim.physics.kg_dynamics import velocity_kg
from bohmsim.physics.weak_value import psi_m, velocity_m
from bohmsim.types import FloatOrArray

logger = logging.getLogger(__name__)


class VelocityField(ABC):
    """
    Evaluator (t, x1, x2) -> (v1, v2) plus the equal-time probability density
    the velocities transport. Subclasses must be pure and broadcast over arrays.
    """

    name: str = "field"

    def __init__(self, cfg: TwoPhotonConfig) -> None:
        self.cfg = cfg

    @abstractmethod
    def velocity(
        self, t: FloatOrArray, x1: FloatOrArray, x2: FloatOrArray, strict: bool = True
    ) -> tuple[FloatOrArray, FloatOrArray]:
        """Velocities; NodeSingularity (strict) or NaN at interference nodes."""

    @abstractmethod
    def density(self, t: FloatOrArray, x1: FloatOrArray, x2: FloatOrArray) -> FloatOrArray:
        """|ψ(t, x1, x2)|² on the equal timeslice (not renormalised)."""

    @abstractmethod
    def marginal(self, packet: Packet, t: float) -> tuple[float, float]:
        """Mean and standard deviation of one packet's |ψ(t, x)|²."""

    def __call__(self, t, x1, x2, strict: bool = True):
        return self.velocity(t, x1, x2, strict)

    def describe(self) -> dict:
        return {
            "field": self.name,
            "k0R": self.cfg.right.center,
            "sigmaR": self.cfg.right.width,
            "k0L": self.cfg.left.center,
            "sigmaL": self.cfg.left.width,
        }


class OpticalField(VelocityField):
    """Relativistic optical-regime field through the KG ("kg") or weak-value ("m") route."""

    def __init__(self, cfg: TwoPhotonConfig, route: str = "kg") -> None:
        super().__init__(cfg)
        if route not in ("kg", "m"):
            raise InvalidParameter(f"route must be 'kg' or 'm', got {route!r}")
        self.route = route
        self.name = f"optical-{route}"

    def velocity(self, t, x1, x2, strict: bool = True):
        if self.route == "kg":
            return velocity_kg(self.cfg, MultiPoint.of(t, x1, t, x2), strict=strict)
        return velocity_m(self.cfg, EqualTimePoint(t, x1, x2), strict=strict)

    def density(self, t, x1, x2):
        return np.abs(psi_m(self.cfg, EqualTimePoint(t, x1, x2))) ** 2

    def marginal(self, packet: Packet, t: float) -> tuple[float, float]:
        mean = t if packet.direction is Direction.RIGHT else -t
        return mean, 1.0 / (2.0 * packet.width)


class ParaxialField(VelocityField):
    """Nonrelativistic field with longitudinal wavenumber kz."""

    def __init__(self, cfg: TwoPhotonConfig, kz: float) -> None:
        super().__init__(cfg)
        if kz is None or not kz > 0:
            raise InvalidParameter("the paraxial field needs kz > 0")
        self.kz = float(kz)
        self.name = "paraxial"

    def velocity(self, t, x1, x2, strict: bool = True):
        return paraxial.velocity_paraxial(self.cfg, self.kz, EqualTimePoint(t, x1, x2), strict=strict)

    def density(self, t, x1, x2):
        return np.abs(paraxial.psi_paraxial_pair(self.cfg, self.kz, EqualTimePoint(t, x1, x2))) ** 2

    def marginal(self, packet: Packet, t: float) -> tuple[float, float]:
        return paraxial.marginal(packet, self.kz, t)

    def describe(self) -> dict:
        return {**super().describe(), "kz": self.kz}


def build_field(cfg: TwoPhotonConfig, dispersion: str = "optical", kz: float | None = None, route: str = "kg") -> VelocityField:
    if dispersion == "optical":
        return OpticalField(cfg, route)
    if dispersion == "paraxial":
        return ParaxialField(cfg, kz)
    raise InvalidParameter(f"unknown dispersion {dispersion!r}")
