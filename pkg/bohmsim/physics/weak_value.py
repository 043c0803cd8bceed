"""
bohmsim/physics/weak_value.py
Operational route: the postselected two-photon amplitude ψ_M, the weak-value
numerators of the energy (H) and momentum (k) operators at detectors A (x1)
and B (x2), and the measurement-based velocities.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from bohmsim.config import settings
from bohmsim.models.event import EqualTimePoint
from bohmsim.models.packet import Packet, TwoPhotonConfig
from bohmsim.physics.kg_dynamics import guarded_ratio, node_threshold
from bohmsim.physics.wavepacket import amplitude, amplitude_k, momentum_profile
from bohmsim.tools.quadrature import FOURIER_MEASURE, integrate_complex
from bohmsim.types import ComplexOrArray, FloatOrArray

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Numerators:
    """⟨x̄|k̂_D|ψ⟩ and ⟨x̄|Ĥ_D|ψ⟩ for detectors D = A, B."""

    kA: ComplexOrArray
    kB: ComplexOrArray
    hA: ComplexOrArray
    hB: ComplexOrArray

    def __iter__(self):
        return iter((self.kA, self.kB, self.hA, self.hB))


def _slice_amplitudes(cfg: TwoPhotonConfig, p: EqualTimePoint):
    t, x1, x2 = p.t, p.x1, p.x2
    R, L = cfg.right, cfg.left
    return (
        amplitude(R, t - x1), amplitude(R, t - x2),
        amplitude(L, t + x1), amplitude(L, t + x2),
        amplitude_k(R, t - x1), amplitude_k(R, t - x2),
        amplitude_k(L, t + x1), amplitude_k(L, t + x2),
    )


# ─── Public API ───────────────────────────────────────────────────────────────

def psi_m(cfg: TwoPhotonConfig, p: EqualTimePoint) -> ComplexOrArray:
    """ψ_M(t, x1, x2) = (ψ1(t,x1)ψ2(t,x2) + ψ1(t,x2)ψ2(t,x1))/√2."""
    r1, r2, l1, l2 = _slice_amplitudes(cfg, p)[:4]
    return (r1 * l2 + r2 * l1) / SQRT2


def wv_numerators(cfg: TwoPhotonConfig, p: EqualTimePoint) -> Numerators:
    r1, r2, l1, l2, rk1, rk2, lk1, lk2 = _slice_amplitudes(cfg, p)
    kA = (rk1 * l2 - r2 * lk1) / SQRT2
    hA = (rk1 * l2 + r2 * lk1) / SQRT2
    kB = (rk2 * l1 - r1 * lk2) / SQRT2
    hB = (r1 * lk2 + rk2 * l1) / SQRT2
    return Numerators(kA=kA, kB=kB, hA=hA, hB=hB)


def weak_value_components(cfg: TwoPhotonConfig, p: EqualTimePoint) -> dict[str, FloatOrArray]:
    """
    2Re[ψ_M*·numerator] for each numerator; on the equal timeslice these are
    ρ1 (hA), j1 (kA), ρ2 (hB) and j2 (kB).
    """
    psi = np.conj(psi_m(cfg, p))
    n = wv_numerators(cfg, p)
    return {
        "rho1": 2.0 * np.real(psi * n.hA),
        "j1": 2.0 * np.real(psi * n.kA),
        "rho2": 2.0 * np.real(psi * n.hB),
        "j2": 2.0 * np.real(psi * n.kB),
    }


def velocity_m(
    cfg: TwoPhotonConfig,
    p: EqualTimePoint,
    node_eps: float | None = None,
    strict: bool = True,
) -> tuple[FloatOrArray, FloatOrArray]:
    """v1 = Re[ψ_M*·kA]/Re[ψ_M*·hA] and v2 = Re[ψ_M*·kB]/Re[ψ_M*·hB]."""
    comp = weak_value_components(cfg, p)
    thr = node_threshold(cfg, node_eps)
    where = {"t": p.t, "x1": p.x1, "x2": p.x2}
    v1 = guarded_ratio(comp["j1"], comp["rho1"], thr, strict, "velocity_m[1]", where)
    v2 = guarded_ratio(comp["j2"], comp["rho2"], thr, strict, "velocity_m[2]", where)
    return v1, v2


# ─── Operator contraction (quadrature) ────────────────────────────────────────

def _family_interval(packet: Packet, onto: int) -> tuple[float, float]:
    """Momenta of mode family `onto` (1: k >= 0, 2: k < 0) within reach of the packet."""
    reach = abs(packet.signed_center) + settings.QUAD_HALF_WIDTH * packet.width
    return (0.0, reach) if onto == 1 else (-reach, 0.0)


def _mode_integral(
    packet: Packet,
    t: float,
    x: float,
    tol: float,
    onto: int | None = None,
) -> complex:
    """
    ∫dk e^{-i|k|t + ikx} g(k) f(k) / √(2π) with f centered at the packet's signed
    momentum.

    With `onto` the detector Hamiltonian acts first: Ĥ_D is diagonal in k with
    eigenvalue |k|, so its element onto mode family `onto` weights the packet by
    |k| over that family's half-line. Without it g = 1 over the packet window.
    """
    c = packet.signed_center
    if onto is None:
        half = settings.QUAD_HALF_WIDTH * packet.width
        lo, hi = c - half, c + half
    else:
        lo, hi = _family_interval(packet, onto)
    scale = (2.0 * packet.width**2 / math.pi) ** 0.25 * (packet.center if onto else 1.0)

    def integrand(k: float) -> complex:
        g = abs(k) if onto else 1.0
        return FOURIER_MEASURE * g * np.exp(-1j * abs(k) * t + 1j * k * x) * momentum_profile(packet, k, signed=True)

    return integrate_complex(integrand, lo, hi, tol, scale)


def t_terms(cfg: TwoPhotonConfig, p: EqualTimePoint, detector: str = "A", tol: float = 1e-11) -> dict[str, complex]:
    """
    The four contributions T1..T4 to ⟨x̄|Ĥ_D|ψ⟩ for a scalar point, by quadrature.

    Photon modes: 1 is the right-mover (k >= 0), 2 the left-mover (k < 0).
    Detector A sits at x1 and B at x2; Ĥ_D acts on the modes arriving at D. T2
    and T3 project one photon's packet onto the other mode family; they are
    only the packets' momentum tails across k = 0 and vanish in the optical
    regime. The symmetrised state contributes an overall 1/√2, so (T1 + T4)/√2
    equals the closed-form hD numerator.
    """
    t, x1, x2 = float(p.t), float(p.x1), float(p.x2)
    R, L = cfg.right, cfg.left
    if detector == "A":
        xd, xo = x1, x2
    elif detector == "B":
        xd, xo = x2, x1
    else:
        raise ValueError(f"detector must be 'A' or 'B', got {detector!r}")

    # T1: photon 1 at D (weighted), photon 2 at the other detector.
    T1 = _mode_integral(R, t, xd, tol, onto=1) * _mode_integral(L, t, xo, tol)
    # T2 / T3: Ĥ_D between different mode families.
    T2 = _mode_integral(R, t, xd, tol, onto=2) * _mode_integral(L, t, xo, tol)
    T3 = _mode_integral(L, t, xd, tol, onto=1) * _mode_integral(R, t, xo, tol)
    # T4: photon 2 at D (weighted), photon 1 at the other detector.
    T4 = _mode_integral(L, t, xd, tol, onto=2) * _mode_integral(R, t, xo, tol)
    logger.debug(
        "t_terms[%s] at (%.3g, %.3g, %.3g): |T1|=%.3e |T2|=%.3e |T3|=%.3e |T4|=%.3e",
        detector, t, x1, x2, abs(T1), abs(T2), abs(T3), abs(T4),
    )
    return {"T1": T1, "T2": T2, "T3": T3, "T4": T4}
