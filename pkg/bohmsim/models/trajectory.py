"""
bohmsim/models/trajectory.py
Integrated trajectory pairs, their integrator bookkeeping and ensembles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from bohmsim.models.packet import TwoPhotonConfig


@dataclass
class IntegratorStats:
    steps: int = 0
    rejected: int = 0        # steps rejected by the error controller
    nfev: int = 0
    node_retries: int = 0    # restarts after an interference node was hit
    duration_ms: int = 0

    def merge(self, other: "IntegratorStats") -> "IntegratorStats":
        return IntegratorStats(
            steps=self.steps + other.steps,
            rejected=self.rejected + other.rejected,
            nfev=self.nfev + other.nfev,
            node_retries=self.node_retries + other.node_retries,
            duration_ms=self.duration_ms + other.duration_ms,
        )


@dataclass
class TrajectoryPair:
    """
    Ordered samples (t, x1, x2, v1, v2) of one integrated pair.

    `dense` is a callable t -> (x1, x2) covering [t[0], t[-1]] when the
    integrator kept its continuous extension; snapshots fall back to
    Hermite interpolation of the samples otherwise.

    `aborted` is {"t": ..., "reason": ...} when the pair ran into a
    singularity of the field; its samples then stop at that time.
    """

    t: npt.NDArray[np.float64]
    x1: npt.NDArray[np.float64]
    x2: npt.NDArray[np.float64]
    v1: npt.NDArray[np.float64]
    v2: npt.NDArray[np.float64]
    pair_id: int = 0
    stats: IntegratorStats = field(default_factory=IntegratorStats)
    meta: dict[str, Any] = field(default_factory=dict)
    dense: Any = None
    aborted: dict[str, Any] | None = None

    @property
    def t0(self) -> float:
        return float(self.t[0])

    @property
    def t1(self) -> float:
        return float(self.t[-1])

    @property
    def min_separation(self) -> float:
        return float(np.min(self.x2 - self.x1))

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def rows(self) -> npt.NDArray[np.float64]:
        """(n, 5) array with columns t, x1, x2, v1, v2."""
        return np.column_stack([self.t, self.x1, self.x2, self.v1, self.v2])


@dataclass
class Ensemble:
    pairs: list[TrajectoryPair]
    seed: int | None
    t0: float
    cfg: TwoPhotonConfig | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.pairs)

    def initial_positions(self) -> npt.NDArray[np.float64]:
        return np.array([[p.x1[0], p.x2[0]] for p in self.pairs], dtype=float).reshape(-1, 2)


@dataclass
class BoostedPair:
    """
    A pair's worldlines in a boosted frame, sampled along a common parameter.

    For mapped and reintegrated paths `tau` is original-frame time and t1, t2
    differ; for equal-time paths `tau` is the boosted time and t1 = t2 = tau.
    """

    tau: npt.NDArray[np.float64]
    t1: npt.NDArray[np.float64]
    x1: npt.NDArray[np.float64]
    t2: npt.NDArray[np.float64]
    x2: npt.NDArray[np.float64]
    path: str
    pair_id: int = 0
    stats: IntegratorStats = field(default_factory=IntegratorStats)
    aborted: dict[str, Any] | None = None

    def rows(self) -> npt.NDArray[np.float64]:
        return np.column_stack([self.tau, self.t1, self.x1, self.t2, self.x2])
