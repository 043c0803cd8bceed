"""
bohmsim/physics/lorentz.py
Collinear Lorentz boosts of events, currents, velocities and packet parameters.
"""
from __future__ import annotations

import logging

import numpy as np

from bohmsim.errors import PoleAtOne
from bohmsim.models.current import Boost, CurrentDensity
from bohmsim.models.event import Event, MultiPoint
from bohmsim.models.packet import TwoPhotonConfig
from bohmsim.physics.kg_dynamics import currents
from bohmsim.types import FloatOrArray

logger = logging.getLogger(__name__)

# |1 - θv| below this counts as the pole of the addition rule.
POLE_EPS = 1e-15


def boost_event(b: Boost, e: Event) -> Event:
    """(t, x) -> γ(t - θx, x - θt)."""
    g, th = b.gamma, b.theta
    return Event(g * (e.t - th * e.x), g * (e.x - th * e.t))


def boost_multipoint(b: Boost, mp: MultiPoint) -> MultiPoint:
    return MultiPoint(boost_event(b, mp.e1), boost_event(b, mp.e2))


def boost_current(b: Boost, cd: CurrentDensity) -> CurrentDensity:
    """ρ' = γ(ρ - θj), j' = γ(j - θρ)."""
    g, th = b.gamma, b.theta
    rho = g * (cd.rho - th * cd.j)
    j = g * (cd.j - th * cd.rho)
    if np.any(np.asarray(rho) <= 0.0):
        logger.debug("boost_current: non-positive ρ' at theta=%.3g (backwards-in-time onset)", th)
    return CurrentDensity(rho, j)


def add_velocity(b: Boost, v: FloatOrArray) -> FloatOrArray:
    """
    Relativistic addition v' = (v - θ)/(1 - θv).

    Raises
    ------
    PoleAtOne : θ·v = 1 anywhere in `v`.
    """
    v_arr = np.asarray(v, dtype=float)
    den = 1.0 - b.theta * v_arr
    if np.any(np.abs(den) < POLE_EPS):
        raise PoleAtOne(f"velocity addition pole: theta={b.theta!r} maps v=1/theta to infinity")
    out = (v_arr - b.theta) / den
    return out if out.ndim else float(out)


def compose(first: Boost, second: Boost) -> Boost:
    """Boost equivalent to applying `first` then `second` (rapidities add)."""
    return Boost((first.theta + second.theta) / (1.0 + first.theta * second.theta))


def inverse(b: Boost) -> Boost:
    return Boost(-b.theta)


def redshift_packets(b: Boost, cfg: TwoPhotonConfig) -> TwoPhotonConfig:
    """
    Doppler-shift both packets into the boosted frame.

    The right-mover's (k0, σ) scale by √((1-θ)/(1+θ)) and the left-mover's by
    the reciprocal, so q is invariant per packet.
    """
    return TwoPhotonConfig(
        right=cfg.right.scaled(b.doppler_right),
        left=cfg.left.scaled(b.doppler_left),
    )


def boosted_currents(
    b: Boost, cfg: TwoPhotonConfig, mp: MultiPoint
) -> tuple[CurrentDensity, CurrentDensity]:
    """Original-frame currents at `mp`, transformed component-wise into the boosted frame."""
    c1, c2 = currents(cfg, mp)
    return boost_current(b, c1), boost_current(b, c2)


def covariance_residual(b: Boost, cfg: TwoPhotonConfig, mp: MultiPoint) -> dict[str, FloatOrArray]:
    """
    Differences between the transformed currents and the currents of the
    redshifted configuration evaluated at the boosted multitime point.
    """
    transformed = boosted_currents(b, cfg, mp)
    primed = currents(redshift_packets(b, cfg), boost_multipoint(b, mp))
    out: dict[str, FloatOrArray] = {}
    for i, (tr, pr) in enumerate(zip(transformed, primed), start=1):
        out[f"rho{i}"] = tr.rho - pr.rho
        out[f"j{i}"] = tr.j - pr.j
    return out
