"""
bohmsim/physics/wavepacket.py
Closed-form position-space wavefunctions of Gaussian momentum packets, their
energy-weighted (k-weighted) integrals and the quadrature oracle that certifies them.

Optical approximation: the k-integral runs over the whole real line, so a
right-mover depends on u = t - x only and a left-mover on v = t + x only.
"""
from __future__ import annotations

import enum
import logging
import math

import numpy as np

from bohmsim.config import settings
from bohmsim.errors import InvalidParameter
from bohmsim.models.event import Event
from bohmsim.models.packet import Direction, Packet
from bohmsim.tools.quadrature import FOURIER_MEASURE, integrate_complex
from bohmsim.types import ComplexOrArray, FloatOrArray

logger = logging.getLogger(__name__)


class Integrand(str, enum.Enum):
    PSI = "psi"
    PSI_K = "psi_k"
    PARAXIAL = "paraxial"


# ─── Lightcone primitives ─────────────────────────────────────────────────────

def prefactor(p: Packet) -> float:
    """(2σ²/π)^(1/4), the peak modulus of the position-space packet."""
    return (2.0 * p.width**2 / math.pi) ** 0.25


def amplitude(p: Packet, w: FloatOrArray) -> ComplexOrArray:
    """ψ(w) = (2σ²/π)^(1/4) exp[-w(i k0 + w σ²)], with w = u for right-movers and v for left-movers."""
    w = np.asarray(w, dtype=float)
    return prefactor(p) * np.exp(-w * (1j * p.center + w * p.width**2))


def amplitude_k(p: Packet, w: FloatOrArray) -> ComplexOrArray:
    """Energy-weighted amplitude (k0 - 2iσ²w)·ψ(w), from differentiating under the integral."""
    w = np.asarray(w, dtype=float)
    return (p.center - 2j * p.width**2 * w) * amplitude(p, w)


def lightcone_argument(p: Packet, e: Event) -> FloatOrArray:
    return e.u if p.direction is Direction.RIGHT else e.v


def _require(p: Packet, direction: Direction, op: str) -> None:
    if p.direction is not direction:
        raise InvalidParameter(f"{op} needs a {direction.value}-moving packet, got {p.direction.value}")


# ─── Public API ───────────────────────────────────────────────────────────────

def psi1(p: Packet, e: Event) -> ComplexOrArray:
    """Right-moving photon wavefunction ψ1(t, x), a function of u = t - x."""
    _require(p, Direction.RIGHT, "psi1")
    return amplitude(p, e.u)


def psi2(p: Packet, e: Event) -> ComplexOrArray:
    """Left-moving photon wavefunction ψ2(t, x), a function of v = t + x."""
    _require(p, Direction.LEFT, "psi2")
    return amplitude(p, e.v)


def psi1_k(p: Packet, e: Event) -> ComplexOrArray:
    _require(p, Direction.RIGHT, "psi1_k")
    return amplitude_k(p, e.u)


def psi2_k(p: Packet, e: Event) -> ComplexOrArray:
    _require(p, Direction.LEFT, "psi2_k")
    return amplitude_k(p, e.v)


def momentum_profile(p: Packet, k: FloatOrArray, signed: bool = False) -> FloatOrArray:
    """
    f(k) = 𝒩 exp[-(k - k0)²/4σ²].

    With `signed` the center is placed at -k0 for left-movers (support on k < 0);
    otherwise it sits at +k0 and the left-mover's direction is carried by e^{-ik(t+x)}.
    """
    center = p.signed_center if signed else p.center
    k = np.asarray(k, dtype=float)
    return p.norm * np.exp(-((k - center) ** 2) / (4.0 * p.width**2))


def quad_oracle(
    selector: Integrand | str,
    p: Packet,
    e: Event,
    tol: float = 1e-10,
    kz: float | None = None,
) -> complex:
    """
    Adaptive quadrature of the selected k-integral over k0 ± QUAD_HALF_WIDTH·σ.

    Parameters
    ----------
    selector : Integrand.PSI (ψ1 / ψ2), Integrand.PSI_K (ψ1k / ψ2k) or
               Integrand.PARAXIAL (needs kz).
    p        : Packet; its direction picks u or v (and the sign of k for PARAXIAL).
    e        : Scalar event.
    tol      : Target error relative to the packet's peak modulus.

    Raises
    ------
    NonConvergence   : QUADPACK could not reach tol.
    InvalidParameter : PARAXIAL without kz > 0.
    """
    selector = Integrand(selector)
    t, x = float(e.t), float(e.x)
    half = settings.QUAD_HALF_WIDTH * p.width
    scale = prefactor(p)

    if selector is Integrand.PARAXIAL:
        if kz is None or not kz > 0:
            raise InvalidParameter("paraxial quadrature needs kz > 0")
        c = p.signed_center

        def integrand(k: float) -> complex:
            phase = -(kz + k * k / (2.0 * kz)) * t + k * x
            return FOURIER_MEASURE * np.exp(1j * phase) * momentum_profile(p, k, signed=True)

        return integrate_complex(integrand, c - half, c + half, tol, scale)

    w = t - x if p.direction is Direction.RIGHT else t + x
    weighted = selector is Integrand.PSI_K
    if weighted:
        scale *= p.center

    def integrand(k: float) -> complex:
        value = FOURIER_MEASURE * np.exp(-1j * k * w) * momentum_profile(p, k)
        return k * value if weighted else value

    return integrate_complex(integrand, p.center - half, p.center + half, tol, scale)


def norm_on_slice(p: Packet, t: float, n: int = 4001, widths: float = 8.0) -> float:
    """Trapezoid ∫|ψ(t, x)|² dx over ±`widths` spatial widths around the packet center."""
    sigma_x = 1.0 / (2.0 * p.width)
    center = t if p.direction is Direction.RIGHT else -t
    x = np.linspace(center - widths * sigma_x, center + widths * sigma_x, n)
    psi = amplitude(p, lightcone_argument(p, Event(np.full_like(x, t), x)))
    return float(np.trapezoid(np.abs(psi) ** 2, x))
