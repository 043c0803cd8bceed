"""
bohmsim/physics/kg_dynamics.py
Multitime Klein-Gordon route: the position/time-symmetrised two-photon
wavefunction, its two conserved currents and the Bohmian velocities j_i/ρ_i.

Conventions: ρ_i = 2Re[ψ*·i∂_{t_i}ψ] and j_i = 2Im[ψ*∂_{x_i}ψ], so a free
right-mover carries ρ = j = 2k0|ψ|² > 0. Every function broadcasts over array
coordinates.
"""
from __future__ import annotations

import logging
import math

import numpy as np

from bohmsim.config import settings
from bohmsim.errors import InvalidParameter, NodeSingularity
from bohmsim.models.current import CurrentDensity
from bohmsim.models.event import Event, EqualTimePoint, MultiPoint
from bohmsim.models.packet import TwoPhotonConfig
from bohmsim.physics.wavepacket import amplitude
from bohmsim.types import ComplexOrArray, FloatOrArray

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


# ─── Internal helpers ─────────────────────────────────────────────────────────

def _lightcone(mp: MultiPoint) -> tuple[FloatOrArray, FloatOrArray, FloatOrArray, FloatOrArray]:
    """(U1, U2, V1, V2) with U_i = t_i - x_i and V_i = t_i + x_i."""
    return mp.e1.u, mp.e2.u, mp.e1.v, mp.e2.v


def _shift(mp: MultiPoint, particle: int, dt: float = 0.0, dx: float = 0.0) -> MultiPoint:
    if particle == 1:
        return MultiPoint(Event(mp.e1.t + dt, mp.e1.x + dx), mp.e2)
    if particle == 2:
        return MultiPoint(mp.e1, Event(mp.e2.t + dt, mp.e2.x + dx))
    raise InvalidParameter(f"particle must be 1 or 2, got {particle!r}")


def _overlap_terms(cfg: TwoPhotonConfig, mp: MultiPoint):
    """C², the two diagonal Gaussians A and B, the cross envelope E and the fringe phase φ."""
    U1, U2, V1, V2 = _lightcone(mp)
    sR2, sL2 = cfg.right.width**2, cfg.left.width**2
    kR, kL = cfg.right.center, cfg.left.center

    c2 = 2.0 * cfg.right.width * cfg.left.width / math.pi
    A = np.exp(-2.0 * (U1 * U1 * sR2 + V2 * V2 * sL2))
    B = np.exp(-2.0 * (U2 * U2 * sR2 + V1 * V1 * sL2))
    E = np.exp(-sR2 * (U1 * U1 + U2 * U2) - sL2 * (V1 * V1 + V2 * V2))
    phi = kR * (U1 - U2) - kL * (V1 - V2)
    return c2, A, B, E, phi


# ─── Public API ───────────────────────────────────────────────────────────────

def psi_kg(cfg: TwoPhotonConfig, mp: MultiPoint) -> ComplexOrArray:
    """ψ_KG = (ψ1(X1)ψ2(X2) + ψ1(X2)ψ2(X1))/√2, symmetric under X1 <-> X2."""
    U1, U2, V1, V2 = _lightcone(mp)
    a = amplitude(cfg.right, U1) * amplitude(cfg.left, V2)
    b = amplitude(cfg.right, U2) * amplitude(cfg.left, V1)
    return (a + b) / SQRT2


def currents(cfg: TwoPhotonConfig, mp: MultiPoint) -> tuple[CurrentDensity, CurrentDensity]:
    """Closed-form (ρ1, j1) and (ρ2, j2) in lightcone variables."""
    U1, U2, V1, V2 = _lightcone(mp)
    sR2, sL2 = cfg.right.width**2, cfg.left.width**2
    kR, kL = cfg.right.center, cfg.left.center
    c2, A, B, E, phi = _overlap_terms(cfg, mp)
    cos, sin = np.cos(phi), np.sin(phi)

    rho1 = c2 * (kR * A + kL * B + E * ((kR + kL) * cos + 2.0 * (V1 * sL2 - U1 * sR2) * sin))
    rho2 = c2 * (kL * A + kR * B + E * ((kR + kL) * cos - 2.0 * (V2 * sL2 - U2 * sR2) * sin))
    j1 = c2 * (kR * A - kL * B + E * ((kR - kL) * cos - 2.0 * (V1 * sL2 + U1 * sR2) * sin))
    j2 = c2 * (-kL * A + kR * B + E * ((kR - kL) * cos + 2.0 * (V2 * sL2 + U2 * sR2) * sin))
    return CurrentDensity(rho1, j1), CurrentDensity(rho2, j2)


def current_1(cfg: TwoPhotonConfig, mp: MultiPoint) -> CurrentDensity:
    return currents(cfg, mp)[0]


def current_2(cfg: TwoPhotonConfig, mp: MultiPoint) -> CurrentDensity:
    return currents(cfg, mp)[1]


def density_scale(cfg: TwoPhotonConfig) -> float:
    """Analytic bound 2C²(k0R + k0L) on |ρ_i|; the reference for the node threshold."""
    return 4.0 * cfg.right.width * cfg.left.width / math.pi * cfg.total_center


def node_threshold(cfg: TwoPhotonConfig, node_eps: float | None = None) -> float:
    return (settings.NODE_EPS if node_eps is None else node_eps) * density_scale(cfg)


def guarded_ratio(
    num: FloatOrArray,
    den: FloatOrArray,
    threshold: float,
    strict: bool,
    label: str,
    where: dict | None = None,
) -> FloatOrArray:
    """num/den, raising NodeSingularity (strict) or yielding NaN where |den| < threshold."""
    den = np.asarray(den, dtype=float)
    bad = np.abs(den) < threshold
    if np.any(bad):
        if strict:
            idx = np.unravel_index(int(np.argmax(bad)), den.shape) if den.ndim else ()
            raise NodeSingularity(
                f"{label}: density {float(den[idx]):.3e} below node threshold {threshold:.3e}",
                where={k: float(np.broadcast_to(v, den.shape)[idx]) for k, v in (where or {}).items()},
                density=float(den[idx]),
            )
        den = np.where(bad, np.nan, den)
    out = np.asarray(num, dtype=float) / den
    return out if out.ndim else float(out)


def velocity_kg(
    cfg: TwoPhotonConfig,
    mp: MultiPoint,
    node_eps: float | None = None,
    strict: bool = True,
) -> tuple[FloatOrArray, FloatOrArray]:
    """
    Bohmian velocities v_i = j_i/ρ_i at a multitime point.

    Parameters
    ----------
    node_eps : Node threshold relative to density_scale(cfg); defaults to settings.NODE_EPS.
    strict   : Raise NodeSingularity at nodes; otherwise return NaN there.
    """
    c1, c2 = currents(cfg, mp)
    thr = node_threshold(cfg, node_eps)
    where = {"t1": mp.e1.t, "x1": mp.e1.x, "t2": mp.e2.t, "x2": mp.e2.x}
    v1 = guarded_ratio(c1.j, c1.rho, thr, strict, "velocity_kg[1]", where)
    v2 = guarded_ratio(c2.j, c2.rho, thr, strict, "velocity_kg[2]", where)
    return v1, v2


def velocity_kg_equal_time(
    cfg: TwoPhotonConfig, p: EqualTimePoint, node_eps: float | None = None, strict: bool = True
) -> tuple[FloatOrArray, FloatOrArray]:
    return velocity_kg(cfg, p.to_multipoint(), node_eps, strict)


def optical_residual(cfg: TwoPhotonConfig, mp: MultiPoint) -> FloatOrArray:
    """
    Exact sin-term by which ρ1 + ρ2 differs from 2(k0R + k0L)|ψ_KG|²:
    2C²E·((V1 - V2)σL² - (U1 - U2)σR²)·sin φ.
    """
    U1, U2, V1, V2 = _lightcone(mp)
    c2, _, _, E, phi = _overlap_terms(cfg, mp)
    coeff = (V1 - V2) * cfg.left.width**2 - (U1 - U2) * cfg.right.width**2
    return 2.0 * c2 * E * coeff * np.sin(phi)


def density_difference(cfg: TwoPhotonConfig, mp: MultiPoint) -> FloatOrArray:
    """Closed form of ρ1 - ρ2."""
    U1, U2, V1, V2 = _lightcone(mp)
    kR, kL = cfg.right.center, cfg.left.center
    sR2, sL2 = cfg.right.width**2, cfg.left.width**2
    c2, A, B, E, phi = _overlap_terms(cfg, mp)
    return c2 * ((kR - kL) * (A - B) + 2.0 * E * ((V1 + V2) * sL2 - (U1 + U2) * sR2) * np.sin(phi))


# ─── Finite-difference oracles ────────────────────────────────────────────────

def fd_currents(cfg: TwoPhotonConfig, mp: MultiPoint, h: float) -> tuple[CurrentDensity, CurrentDensity]:
    """(ρ_i, j_i) from central differences of psi_kg in the multitime variables."""
    psi = psi_kg(cfg, mp)
    out = []
    for particle in (1, 2):
        dpsi_dt = (psi_kg(cfg, _shift(mp, particle, dt=h)) - psi_kg(cfg, _shift(mp, particle, dt=-h))) / (2.0 * h)
        dpsi_dx = (psi_kg(cfg, _shift(mp, particle, dx=h)) - psi_kg(cfg, _shift(mp, particle, dx=-h))) / (2.0 * h)
        rho = -2.0 * np.imag(np.conj(psi) * dpsi_dt)
        j = 2.0 * np.imag(np.conj(psi) * dpsi_dx)
        out.append(CurrentDensity(rho, j))
    return out[0], out[1]


def richardson_currents(cfg: TwoPhotonConfig, mp: MultiPoint, h: float) -> tuple[CurrentDensity, CurrentDensity]:
    """Richardson-extrapolated FD currents, (4·D(h/2) - D(h))/3, accurate to O(h⁴)."""
    coarse = fd_currents(cfg, mp, h)
    fine = fd_currents(cfg, mp, h / 2.0)
    return tuple(
        CurrentDensity((4.0 * f.rho - c.rho) / 3.0, (4.0 * f.j - c.j) / 3.0)
        for c, f in zip(coarse, fine)
    )


def continuity_residual(cfg: TwoPhotonConfig, mp: MultiPoint, particle: int, h: float) -> FloatOrArray:
    """Central-difference ∂ρ_i/∂t_i + ∂j_i/∂x_i with the other particle held fixed."""
    idx = particle - 1
    rho_p = currents(cfg, _shift(mp, particle, dt=h))[idx].rho
    rho_m = currents(cfg, _shift(mp, particle, dt=-h))[idx].rho
    j_p = currents(cfg, _shift(mp, particle, dx=h))[idx].j
    j_m = currents(cfg, _shift(mp, particle, dx=-h))[idx].j
    return (rho_p - rho_m + j_p - j_m) / (2.0 * h)


def wave_equation_residual(cfg: TwoPhotonConfig, mp: MultiPoint, particle: int, h: float) -> ComplexOrArray:
    """Diagnostic FD value of (∂²_{t_i} - ∂²_{x_i})ψ_KG; zero for the exact massless solution."""
    psi = psi_kg(cfg, mp)
    d2t = psi_kg(cfg, _shift(mp, particle, dt=h)) - 2.0 * psi + psi_kg(cfg, _shift(mp, particle, dt=-h))
    d2x = psi_kg(cfg, _shift(mp, particle, dx=h)) - 2.0 * psi + psi_kg(cfg, _shift(mp, particle, dx=-h))
    return (d2t - d2x) / (h * h)


def foliation_commutator(
    cfg: TwoPhotonConfig, p: EqualTimePoint, h: float = 1e-4
) -> tuple[FloatOrArray, FloatOrArray]:
    """
    (∂_{t2} + v2∂_{x2})v1 and (∂_{t1} + v1∂_{x1})v2 at an equal-time point.

    Non-zero values mean a particle's velocity depends on where along the
    partner's worldline it is paired, so equal-time flows in different frames
    trace different worldlines.
    """
    mp = p.to_multipoint()
    v1, v2 = velocity_kg(cfg, mp, strict=False)

    def v_of(particle_out: int, shifted: MultiPoint) -> FloatOrArray:
        return velocity_kg(cfg, shifted, strict=False)[particle_out - 1]

    d2v1 = (v_of(1, _shift(mp, 2, dt=h)) - v_of(1, _shift(mp, 2, dt=-h))) / (2.0 * h) + v2 * (
        v_of(1, _shift(mp, 2, dx=h)) - v_of(1, _shift(mp, 2, dx=-h))
    ) / (2.0 * h)
    d1v2 = (v_of(2, _shift(mp, 1, dt=h)) - v_of(2, _shift(mp, 1, dt=-h))) / (2.0 * h) + v1 * (
        v_of(2, _shift(mp, 1, dx=h)) - v_of(2, _shift(mp, 1, dx=-h))
    ) / (2.0 * h)
    return d2v1, d1v2
