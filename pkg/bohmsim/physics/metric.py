"""
bohmsim/physics/metric.py
Alcubierre-like quantum metric: shift function from local current data and the
null coordinate velocity that reproduces j/ρ.
"""
from __future__ import annotations

import logging

import numpy as np

from bohmsim.config import settings
from bohmsim.models.current import CurrentDensity, MetricSample
from bohmsim.physics.kg_dynamics import guarded_ratio
from bohmsim.types import FloatOrArray

logger = logging.getLogger(__name__)


def shift_from_current(cd: CurrentDensity, node_eps: float | None = None, strict: bool = True) -> MetricSample:
    """
    vs = (|j/ρ| - 1)·sgn(j/ρ), with sgn(0) = +1 so that j = 0 maps to vs = -1.

    `node_eps` is an absolute density threshold (settings.NODE_EPS by default);
    below it NodeSingularity is raised, or NaN returned when `strict` is off.
    """
    thr = settings.NODE_EPS if node_eps is None else node_eps
    v = np.asarray(guarded_ratio(cd.j, cd.rho, thr, strict, "shift_from_current"))
    sign = np.where(np.isnan(v), np.nan, np.where(v >= 0, 1.0, -1.0))
    vs = (np.abs(v) - 1.0) * sign
    if v.ndim == 0:
        return MetricSample(vs=float(vs), direction=float(sign))
    return MetricSample(vs=vs, direction=sign)


def coordinate_velocity(ms: MetricSample, direction: FloatOrArray | None = None) -> FloatOrArray:
    """
    Solve ds² = 0 for dx/dt; the two branches are vs ± 1.

    The co-moving branch uses `direction` (or the sign stored on the sample);
    it returns j/ρ for a sample built by shift_from_current, whether |j/ρ| is
    above or below 1. Where no sign is known the + branch is used.
    """
    sign = ms.direction if direction is None else direction
    sign = np.where(np.asarray(sign) == 0, 1.0, np.sign(sign))
    out = np.asarray(ms.vs, dtype=float) + sign
    return out if out.ndim else float(out)


def null_branches(ms: MetricSample) -> tuple[FloatOrArray, FloatOrArray]:
    """Both lightcone slopes (vs + 1, vs - 1)."""
    return ms.vs + 1.0, ms.vs - 1.0
