"""
bohmsim/tools/integrator.py
Adaptive explicit Runge-Kutta driver around scipy's OdeSolver classes with
node-aware restarts, step-underflow detection and dense output.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import DOP853, RK45, OdeSolution

from bohmsim.errors import InvalidParameter, NodeEncounter, NodeSingularity, StepUnderflow
from bohmsim.models.trajectory import IntegratorStats

logger = logging.getLogger(__name__)

METHODS = {"DOP853": DOP853, "RK45": RK45}

# accepted steps after a node restart before the step cap is lifted again
RELAX_AFTER = 16


@dataclass
class Solution:
    t: np.ndarray          # sample times
    y: np.ndarray          # (dim, n_samples)
    dense: OdeSolution | None
    stats: IntegratorStats
    t_end: float = math.nan               # last accepted time
    state_end: np.ndarray | None = None   # state at t_end
    aborted: str | None = None            # failure that stopped a truncated run

    @property
    def complete(self) -> bool:
        return self.aborted is None


def sample_grid(t0: float, t1: float, dt: float) -> np.ndarray:
    """t0, t0 ± dt, ... up to and including t1 (either direction)."""
    if dt <= 0:
        raise InvalidParameter(f"sample_dt must be > 0, got {dt!r}")
    span = t1 - t0
    n = int(math.floor(abs(span) / dt + 1e-9))
    grid = t0 + math.copysign(dt, span) * np.arange(n + 1)
    if abs(t1 - grid[-1]) > 1e-12 * max(1.0, abs(t1)):
        grid = np.append(grid, t1)
    else:
        grid[-1] = t1
    return grid


def truncated_grid(grid: np.ndarray, t_end: float) -> np.ndarray:
    """Samples of `grid` reached before t_end, closed by t_end itself."""
    kept = grid[grid < t_end] if grid[-1] > grid[0] else grid[grid > t_end]
    if kept.size == 0 or kept[-1] != t_end:
        kept = np.append(kept, t_end)
    return kept


def integrate(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: np.ndarray,
    t1: float,
    *,
    atol: float,
    rtol: float,
    sample_dt: float,
    max_retries: int = 40,
    min_step: float = 1e-12,
    method: str = "DOP853",
    truncate: bool = False,
) -> Solution:
    """
    Integrate dy/dt = rhs(t, y) from t0 to t1.

    When `rhs` raises NodeSingularity inside a step the solver restarts from the
    last accepted state with its step cap halved. The cap is lifted after a run
    of accepted steps.

    With `truncate` the two failures below do not propagate: the solution stops
    at the last accepted time, samples end there and `aborted` holds the reason.

    Raises
    ------
    NodeEncounter  : more than `max_retries` consecutive node restarts, or a node
                     at the initial state.
    StepUnderflow  : the step (or the step cap) fell below `min_step`.
    """
    if t1 == t0:
        raise InvalidParameter("integration span is empty")
    solver_cls = METHODS[method]
    y0 = np.asarray(y0, dtype=float)
    stats = IntegratorStats()
    start = time.monotonic()

    def make(t: float, y: np.ndarray, max_step: float, first_step: float | None):
        if first_step is not None:
            first_step = min(first_step, abs(t1 - t))
        try:
            return solver_cls(rhs, t, y, t1, max_step=max_step, rtol=rtol, atol=atol, first_step=first_step)
        except NodeSingularity as exc:
            raise NodeEncounter(f"velocity field undefined at the state t={t:.6g}: {exc}") from exc

    max_step = np.inf
    ts: list[float] = [t0]
    y_end = y0.copy()
    interpolants = []
    retries = calm = 0
    aborted: str | None = None
    solver = None

    try:
        solver = make(t0, y0, max_step, None)
        while solver.status == "running":
            nfev_before = solver.nfev
            try:
                message = solver.step()
            except NodeSingularity as exc:
                retries += 1
                stats.node_retries += 1
                stats.nfev += solver.nfev
                t_hit, y_hit, h_hit = solver.t, solver.y, solver.step_size or getattr(solver, "h_abs", None)
                solver = None
                if retries > max_retries:
                    raise NodeEncounter(
                        f"node at t={t_hit:.6g} persisted through {max_retries} step reductions"
                    ) from exc
                max_step = min(max_step, h_hit or abs(t1 - t_hit)) / 2.0
                if max_step < min_step:
                    raise StepUnderflow(f"step cap {max_step:.3e} below {min_step:.1e} near a node at t={t_hit:.6g}")
                logger.debug("node hit near t=%.6g, retry %d with max_step=%.3e", t_hit, retries, max_step)
                solver = make(t_hit, y_hit, max_step, max_step)
                continue

            if solver.status == "failed":
                raise StepUnderflow(f"solver failed at t={solver.t:.6g}: {message}")
            # every attempt evaluates all stages once; attempts beyond the first were rejected
            attempts = round((solver.nfev - nfev_before) / solver.n_stages)
            stats.rejected += max(0, attempts - 1)
            stats.steps += 1
            retries = 0
            interpolants.append(solver.dense_output())
            ts.append(solver.t)
            y_end = solver.y.copy()
            if solver.status == "running" and solver.step_size < min_step:
                raise StepUnderflow(f"step {solver.step_size:.3e} below {min_step:.1e} at t={solver.t:.6g}")

            if np.isfinite(max_step):
                calm += 1
                if calm >= RELAX_AFTER:
                    max_step = np.inf
                    solver.max_step = np.inf
                    calm = 0
    except (NodeEncounter, StepUnderflow) as exc:
        if not truncate:
            raise
        aborted = f"{type(exc).__name__}: {exc}"
        logger.debug("integration truncated at t=%.6g: %s", ts[-1], aborted)

    if solver is not None:
        stats.nfev += solver.nfev
    t_end = ts[-1]
    grid = sample_grid(t0, t1, sample_dt)
    if aborted is not None:
        grid = truncated_grid(grid, t_end)
    if interpolants:
        dense = OdeSolution(np.array(ts), interpolants)
        y = np.asarray(dense(grid)).reshape(y0.shape[0], -1)
    else:
        dense = None
        y = np.repeat(y0[:, None], grid.size, axis=1)
    y[:, 0] = y0
    stats.duration_ms = int((time.monotonic() - start) * 1000)
    return Solution(t=grid, y=y, dense=dense, stats=stats, t_end=t_end, state_end=y_end, aborted=aborted)
