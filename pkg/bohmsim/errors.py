"""
bohmsim/errors.py
Exception hierarchy shared by the physics, engine and CLI layers.
"""
from __future__ import annotations


class BohmSimError(Exception):
    """Root of every error raised by the library."""


class InvalidParameter(BohmSimError, ValueError):
    """A physical parameter violates its domain (k0 <= 0, |theta| >= 1, ...)."""


class NodeSingularity(BohmSimError):
    """A density fell below the node threshold; the velocity is undefined there."""

    def __init__(self, message: str, *, where: dict | None = None, density: float | None = None):
        super().__init__(message)
        self.where = where or {}
        self.density = density


class NonConvergence(BohmSimError):
    """The quadrature oracle could not reach the requested tolerance."""


class PoleAtOne(BohmSimError):
    """Velocity addition hit theta·v = 1."""


class NodeEncounter(BohmSimError):
    """The integrator kept landing on a node after exhausting its retries."""


class StepUnderflow(BohmSimError):
    """The adaptive step shrank below the minimum step."""


class RejectionStall(BohmSimError):
    """Rejection sampling acceptance fell below the stall threshold."""


class OutOfSpan(BohmSimError):
    """A trajectory was queried outside its integration span."""


class ConfigError(BohmSimError):
    """A run configuration failed to parse or validate."""
