"""
bohmsim/physics/paraxial.py
Paraxial (nonrelativistic) limit E(k) ≃ kz + k²/2kz: closed-form Gaussian
packets with complex variance, the symmetrised two-photon wavefunction, the
phase-gradient velocity and the paraxial energy density.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from bohmsim.config import settings
from bohmsim.errors import InvalidParameter
from bohmsim.models.event import Event, EqualTimePoint
from bohmsim.models.packet import Packet, TwoPhotonConfig
from bohmsim.physics.kg_dynamics import guarded_ratio
from bohmsim.tools.quadrature import FOURIER_MEASURE
from bohmsim.types import ComplexOrArray, FloatOrArray

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


def _check_kz(kz: float) -> None:
    if not (math.isfinite(kz) and kz > 0):
        raise InvalidParameter(f"kz must be > 0, got {kz!r}")


def _packet_terms(p: Packet, kz: float, t: FloatOrArray, x: FloatOrArray):
    """ψ, g = ∂xψ/ψ and ∂²xψ/ψ for one paraxial packet."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    s2 = p.width**2
    c = p.signed_center
    a = 1.0 / (4.0 * s2) + 1j * t / (2.0 * kz)
    B = c / (2.0 * s2) + 1j * x
    psi = (
        np.exp(-1j * kz * t)
        * p.norm
        * FOURIER_MEASURE
        * np.sqrt(np.pi / a)
        * np.exp(B * B / (4.0 * a) - c * c / (4.0 * s2))
    )
    g = 1j * B / (2.0 * a)
    return psi, g, g * g - 1.0 / (2.0 * a)


def psi_paraxial(p: Packet, kz: float, e: Event) -> ComplexOrArray:
    """∫dk e^{-i(kz + k²/2kz)t + ikx} f(k)/√(2π) in closed form; f sits at +k0 (right) or -k0 (left)."""
    _check_kz(kz)
    return _packet_terms(p, kz, e.t, e.x)[0]


def marginal(p: Packet, kz: float, t: float) -> tuple[float, float]:
    """Mean and standard deviation of the Gaussian |ψ(t, x)|²."""
    mean = p.signed_center * t / kz
    std = math.sqrt(1.0 / (4.0 * p.width**2) + (p.width * t / kz) ** 2)
    return mean, std


def _two_photon(cfg: TwoPhotonConfig, kz: float, pt: EqualTimePoint):
    r1, gr1, hr1 = _packet_terms(cfg.right, kz, pt.t, pt.x1)
    r2, gr2, hr2 = _packet_terms(cfg.right, kz, pt.t, pt.x2)
    l1, gl1, hl1 = _packet_terms(cfg.left, kz, pt.t, pt.x1)
    l2, gl2, hl2 = _packet_terms(cfg.left, kz, pt.t, pt.x2)
    a, b = r1 * l2, r2 * l1
    psi = (a + b) / SQRT2
    d1 = (a * gr1 + b * gl1) / SQRT2
    d2 = (a * gl2 + b * gr2) / SQRT2
    dd1 = (a * hr1 + b * hl1) / SQRT2
    dd2 = (a * hl2 + b * hr2) / SQRT2
    return psi, (d1, d2), (dd1, dd2)


def psi_paraxial_pair(cfg: TwoPhotonConfig, kz: float, pt: EqualTimePoint) -> ComplexOrArray:
    """Symmetrised two-photon paraxial wavefunction Ψ(t, x1, x2)."""
    _check_kz(kz)
    return _two_photon(cfg, kz, pt)[0]


def density_scale(cfg: TwoPhotonConfig) -> float:
    """Bound on |Ψ|² at t = 0, the reference for the node threshold."""
    return 4.0 * cfg.right.width * cfg.left.width / math.pi


def velocity_paraxial(
    cfg: TwoPhotonConfig,
    kz: float,
    pt: EqualTimePoint,
    node_eps: float | None = None,
    strict: bool = True,
) -> tuple[FloatOrArray, FloatOrArray]:
    """v_i = (1/kz)·Im[Ψ*∂_{x_i}Ψ]/|Ψ|²."""
    _check_kz(kz)
    psi, (d1, d2), _ = _two_photon(cfg, kz, pt)
    dens = np.abs(psi) ** 2
    thr = (settings.NODE_EPS if node_eps is None else node_eps) * density_scale(cfg)
    where = {"t": pt.t, "x1": pt.x1, "x2": pt.x2}
    v1 = guarded_ratio(np.imag(np.conj(psi) * d1) / kz, dens, thr, strict, "velocity_paraxial[1]", where)
    v2 = guarded_ratio(np.imag(np.conj(psi) * d2) / kz, dens, thr, strict, "velocity_paraxial[2]", where)
    return v1, v2


def rho_paraxial(cfg: TwoPhotonConfig, kz: float, pt: EqualTimePoint, particle: int) -> FloatOrArray:
    """Re[Ψ*(kzΨ - (1/2kz)∂²_{x_i}Ψ)], the paraxial energy density of photon i."""
    _check_kz(kz)
    if particle not in (1, 2):
        raise InvalidParameter(f"particle must be 1 or 2, got {particle!r}")
    psi, _, dd = _two_photon(cfg, kz, pt)
    return kz * np.abs(psi) ** 2 - np.real(np.conj(psi) * dd[particle - 1]) / (2.0 * kz)


def fd_velocity_paraxial(
    cfg: TwoPhotonConfig, kz: float, pt: EqualTimePoint, h: float = 1e-4
) -> tuple[FloatOrArray, FloatOrArray]:
    """Phase-gradient velocities from central differences of Ψ."""
    psi = psi_paraxial_pair(cfg, kz, pt)
    dens = np.abs(psi) ** 2
    out = []
    for shift in ((h, 0.0), (0.0, h)):
        up = psi_paraxial_pair(cfg, kz, EqualTimePoint(pt.t, pt.x1 + shift[0], pt.x2 + shift[1]))
        dn = psi_paraxial_pair(cfg, kz, EqualTimePoint(pt.t, pt.x1 - shift[0], pt.x2 - shift[1]))
        out.append(np.imag(np.conj(psi) * (up - dn) / (2.0 * h)) / dens / kz)
    return out[0], out[1]
