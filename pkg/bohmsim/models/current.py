"""
bohmsim/models/current.py
Conserved-current samples, boosts and metric samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bohmsim.errors import InvalidParameter
from bohmsim.types import FloatOrArray


@dataclass(frozen=True)
class CurrentDensity:
    """Per-particle (ρ, j) of the Klein-Gordon current; ρ is an energy density."""

    rho: FloatOrArray
    j: FloatOrArray

    def __post_init__(self) -> None:
        if not (np.all(np.isfinite(self.rho)) and np.all(np.isfinite(self.j))):
            raise InvalidParameter("CurrentDensity components must be finite")

    @property
    def velocity(self) -> FloatOrArray:
        return self.j / self.rho


@dataclass(frozen=True)
class Boost:
    """Collinear boost with frame velocity θ (not rapidity)."""

    theta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and abs(self.theta) < 1.0):
            raise InvalidParameter(f"boost velocity must satisfy |theta| < 1, got {self.theta!r}")

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.theta * self.theta)

    @property
    def rapidity(self) -> float:
        return math.atanh(self.theta)

    @property
    def doppler_right(self) -> float:
        """sqrt((1-θ)/(1+θ)): scale factor of a right-mover's (k0, σ); u' = u / doppler_right."""
        return math.sqrt((1.0 - self.theta) / (1.0 + self.theta))

    @property
    def doppler_left(self) -> float:
        return 1.0 / self.doppler_right

    @classmethod
    def from_rapidity(cls, eta: float) -> "Boost":
        return cls(math.tanh(eta))

    @classmethod
    def identity(cls) -> "Boost":
        return cls(0.0)


@dataclass(frozen=True)
class MetricSample:
    """Alcubierre-like line element ds² = -(1 - vs²)dt² - 2 vs dx dt + dx²."""

    vs: FloatOrArray
    # sgn(j/ρ) of the current the shift was built from; 0 when unknown
    direction: FloatOrArray = 0.0

    @property
    def g_tt(self) -> FloatOrArray:
        return -(1.0 - self.vs * self.vs)

    @property
    def g_tx(self) -> FloatOrArray:
        return -self.vs

    @property
    def g_xx(self) -> FloatOrArray:
        return 1.0 if np.ndim(self.vs) == 0 else np.ones_like(self.vs)

    def line_element(self, dt: FloatOrArray, dx: FloatOrArray) -> FloatOrArray:
        # ds² = g_tt dt² + 2 g_tx dt dx + g_xx dx²
        return self.g_tt * dt * dt + 2.0 * self.g_tx * dt * dx + self.g_xx * dx * dx
