"""
bohmsim/models/packet.py
Gaussian momentum wavepackets and the two-photon configuration built from them.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, replace

from bohmsim.errors import InvalidParameter

logger = logging.getLogger(__name__)

# Below this center/width ratio the full-line optical approximation is no longer validated.
VALIDATED_Q = 10.0


class Direction(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"

    @property
    def opposite(self) -> "Direction":
        return Direction.LEFT if self is Direction.RIGHT else Direction.RIGHT


@dataclass(frozen=True)
class Packet:
    """
    Gaussian momentum wavepacket f(k) = 𝒩 exp[-(k - k0)² / 4σ²] with 𝒩 = (2πσ²)^(-1/4).

    `center` is the magnitude k0 > 0; the propagation direction is carried by
    `direction`, so a left-mover is supported near k = -k0.
    """

    center: float
    width: float
    direction: Direction = Direction.RIGHT

    def __post_init__(self) -> None:
        if not (math.isfinite(self.center) and self.center > 0):
            raise InvalidParameter(f"packet center must be > 0, got {self.center!r}")
        if not (math.isfinite(self.width) and self.width > 0):
            raise InvalidParameter(f"packet width must be > 0, got {self.width!r}")
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.q < VALIDATED_Q:
            logger.debug("packet q=%.3g is outside the validated optical regime", self.q)

    @property
    def q(self) -> float:
        """Optical quality factor k0/σ."""
        return self.center / self.width

    @property
    def outside_validated_regime(self) -> bool:
        return self.q < VALIDATED_Q

    @property
    def norm(self) -> float:
        """𝒩 such that ∫|f|² dk = 1."""
        return (2.0 * math.pi * self.width**2) ** -0.25

    @property
    def signed_center(self) -> float:
        return self.center if self.direction is Direction.RIGHT else -self.center

    def mirrored(self) -> "Packet":
        return replace(self, direction=self.direction.opposite)

    def scaled(self, factor: float) -> "Packet":
        """Scale center and width together (Doppler shift keeps q fixed)."""
        return replace(self, center=self.center * factor, width=self.width * factor)


@dataclass(frozen=True)
class TwoPhotonConfig:
    """A right-moving and a left-moving packet; photon labels follow the detectors."""

    right: Packet
    left: Packet

    def __post_init__(self) -> None:
        if self.right.direction is not Direction.RIGHT:
            raise InvalidParameter("TwoPhotonConfig.right must be a right-moving packet")
        if self.left.direction is not Direction.LEFT:
            raise InvalidParameter("TwoPhotonConfig.left must be a left-moving packet")

    @classmethod
    def symmetric(cls, center: float, width: float) -> "TwoPhotonConfig":
        return cls(
            right=Packet(center, width, Direction.RIGHT),
            left=Packet(center, width, Direction.LEFT),
        )

    @property
    def indistinguishable(self) -> bool:
        return self.right.center == self.left.center and self.right.width == self.left.width

    @property
    def total_center(self) -> float:
        """k0R + k0L, the energy normaliser of the density identity."""
        return self.right.center + self.left.center

    @property
    def q(self) -> float:
        return min(self.right.q, self.left.q)
