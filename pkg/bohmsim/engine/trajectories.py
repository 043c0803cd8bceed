"""
bohmsim/engine/trajectories.py
Coupled trajectory integration dx_i/dt = v_i(t, x1, x2): single pairs, seeded
ensembles, timeslice snapshots and worldlines in boosted frames.
"""
from __future__ import annotations

import enum
import logging
import math
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable, Sequence

import numpy as np
from scipy.integrate import OdeSolution
from scipy.interpolate import CubicHermiteSpline

from bohmsim.errors import InvalidParameter, OutOfSpan
from bohmsim.models.current import Boost
from bohmsim.models.event import Event, MultiPoint
from bohmsim.models.packet import TwoPhotonConfig
from bohmsim.models.trajectory import BoostedPair, Ensemble, IntegratorStats, TrajectoryPair
from bohmsim.physics.fields import OpticalField, VelocityField
from bohmsim.physics.kg_dynamics import currents, guarded_ratio, node_threshold, velocity_kg
from bohmsim.physics.lorentz import boost_current, boost_event, redshift_packets
from bohmsim.schemas.base import IntegratorOptions
from bohmsim.tools.integrator import integrate, sample_grid, truncated_grid
from bohmsim.tools.parallel import parallel_map
from bohmsim.tools.sampling import sample_conditional_x2, sample_pairs
from bohmsim.types import FloatOrArray

logger = logging.getLogger(__name__)


class BoostPath(str, enum.Enum):
    MAPPED = "mapped"                # pointwise boost of original-frame worldlines
    REINTEGRATED = "reintegrated"    # primed-frame integration along images of original slices
    EQUAL_TIME = "equal_time"        # primed-frame integration on equal-t' slices


# ─── Internal helpers ─────────────────────────────────────────────────────────

def _field(source: TwoPhotonConfig | VelocityField) -> VelocityField:
    return source if isinstance(source, VelocityField) else OpticalField(source)


def _run(
    opts: IntegratorOptions, rhs, t0: float, y0: np.ndarray, t1: float, components: int, truncate: bool = False
):
    # scipy's error norm is an RMS over components; scaling atol keeps each component within tol
    return integrate(
        rhs,
        t0,
        y0,
        t1,
        atol=opts.tol / math.sqrt(components),
        rtol=opts.rtol,
        sample_dt=opts.sample_dt,
        max_retries=opts.max_retries,
        min_step=opts.min_step,
        method=opts.method,
        truncate=truncate,
    )


@dataclass
class _Segment:
    t_lo: float
    t_hi: float
    dense: OdeSolution | None
    active: np.ndarray       # pair indices carried by this run


@dataclass
class _BatchRun:
    segments: list[_Segment]
    ends: np.ndarray                                   # last time reached per pair
    end_states: np.ndarray                             # (k, n) state at `ends`
    aborted: dict[int, dict[str, Any]]
    stats: IntegratorStats

    def sample(self, grid: np.ndarray, y0: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
        """Per pair (t, y) on `grid`, cut at the abort time for retired pairs."""
        k, n = y0.shape
        Y = np.full((k, n, grid.size), np.nan)
        for s in self.segments:
            if s.dense is None:
                continue
            cols = np.flatnonzero((grid >= s.t_lo) & (grid <= s.t_hi))
            if cols.size:
                values = np.asarray(s.dense(grid[cols])).reshape(k, s.active.size, cols.size)
                Y[:, s.active[:, None], cols[None, :]] = values
        out = []
        for i in range(n):
            if i in self.aborted:
                t = truncated_grid(grid, float(self.ends[i]))
                y = np.concatenate([Y[:, i, :t.size - 1], self.end_states[:, i, None]], axis=1)
            else:
                t, y = grid.copy(), Y[:, i, :].copy()
            y[:, 0] = y0[:, i]
            out.append((t, y))
        return out


class _PairDense:
    """Continuous extension of one pair across the runs of its batch."""

    def __init__(self, run: _BatchRun, index: int, x0: np.ndarray) -> None:
        self._parts = []
        for s in run.segments:
            pos = np.flatnonzero(s.active == index)
            if s.dense is not None and pos.size:
                self._parts.append((s.t_lo, s.t_hi, s.dense, int(pos[0]), s.active.size))
        self._x0 = np.asarray(x0, dtype=float)

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.repeat(self._x0[:, None], t.size, axis=1)
        if self._parts:
            t = np.clip(t, self._parts[0][0], self._parts[-1][1])
        for lo, hi, dense, pos, m in self._parts:
            sel = (t >= lo) & (t <= hi)
            if np.any(sel):
                out[:, sel] = np.asarray(dense(t[sel])).reshape(2, m, -1)[:, pos, :]
        if scalar:
            return out[0, 0], out[1, 0]
        return out[0], out[1]


def _integrate_retiring(
    opts: IntegratorOptions,
    make_rhs: Callable[[int], Callable[[float, np.ndarray], np.ndarray]],
    y0: np.ndarray,
    t0: float,
    t1: float,
    worst: Callable[[float, np.ndarray], int],
    truncate: bool,
    label: str,
) -> _BatchRun:
    """
    Integrate k components of n pairs (y0 has shape (k, n)) as one vector system.

    With `truncate`, a run stopped by a singularity retires the pair `worst`
    picks from the state reached, and the remaining pairs continue from there.
    Without it the failure propagates.
    """
    k, n = y0.shape
    active = np.arange(n)
    run = _BatchRun([], np.full(n, float(t1)), y0.copy(), {}, IntegratorStats())
    t_start, y = float(t0), y0
    while active.size:
        sol = _run(opts, make_rhs(active.size), t_start, y.ravel(), t1, k * active.size, truncate=truncate)
        run.stats = run.stats.merge(sol.stats)
        run.segments.append(_Segment(t_start, sol.t_end, sol.dense, active))
        state = sol.state_end.reshape(k, active.size)
        run.end_states[:, active] = state
        if sol.complete:
            break
        bad = worst(sol.t_end, state)
        idx = int(active[bad])
        run.ends[idx] = sol.t_end
        run.aborted[idx] = {"t": float(sol.t_end), "reason": sol.aborted}
        logger.warning("%s: pair %d stopped at t=%.6g (%s)", label, idx, sol.t_end, sol.aborted)
        keep = np.arange(active.size) != bad
        active, y, t_start = active[keep], state[:, keep], float(sol.t_end)
    return run


def _batches(ics: np.ndarray, size: int) -> list[np.ndarray]:
    return [ics[i:i + size] for i in range(0, ics.shape[0], size)]


def _check_ics(ics: np.ndarray, t0: float, t1: float) -> np.ndarray:
    ics = np.asarray(ics, dtype=float).reshape(-1, 2)
    if not t1 > t0:
        raise InvalidParameter(f"t1 must exceed t0 (got t0={t0}, t1={t1})")
    if np.any(ics[:, 0] == ics[:, 1]):
        raise InvalidParameter("initial positions x10 and x20 must differ")
    if not np.all(np.isfinite(ics)):
        raise InvalidParameter("initial positions must be finite")
    return ics


# ─── Integration ──────────────────────────────────────────────────────────────

def integrate_batch(
    field: VelocityField,
    ics: np.ndarray,
    t0: float,
    t1: float,
    opts: IntegratorOptions | None = None,
    truncate: bool = True,
) -> list[TrajectoryPair]:
    """
    Integrate several pairs as one vector system; pair order follows `ics`.

    A pair that runs into a singularity of the field is cut at the last time
    reached and carries the diagnostic in `aborted`; the others are unaffected.
    With truncate=False the NodeEncounter or StepUnderflow propagates instead.
    """
    opts = opts or IntegratorOptions()
    ics = _check_ics(ics, t0, t1)

    def make_rhs(m: int):
        def rhs(t: float, y: np.ndarray) -> np.ndarray:
            v1, v2 = field.velocity(t, y[:m], y[m:], strict=True)
            return np.concatenate([np.atleast_1d(v1), np.atleast_1d(v2)])
        return rhs

    def worst(t: float, state: np.ndarray) -> int:
        # the stuck pair is the one whose speed diverges
        v1, v2 = field.velocity(t, state[0], state[1], strict=False)
        speed = np.maximum(np.abs(np.broadcast_to(v1, state[0].shape)), np.abs(np.broadcast_to(v2, state[1].shape)))
        return int(np.argmax(np.where(np.isfinite(speed), speed, np.inf)))

    y0 = ics.T.copy()
    run = _integrate_retiring(opts, make_rhs, y0, t0, t1, worst, truncate, "integrate_batch")
    samples = run.sample(sample_grid(t0, t1, opts.sample_dt), y0)

    pairs = []
    for i, (t, y) in enumerate(samples):
        v1, v2 = field.velocity(t, y[0], y[1], strict=False)
        pairs.append(TrajectoryPair(
            t=t,
            x1=y[0].copy(),
            x2=y[1].copy(),
            v1=np.array(np.broadcast_to(v1, t.shape)),
            v2=np.array(np.broadcast_to(v2, t.shape)),
            pair_id=i,
            stats=run.stats,
            meta=field.describe(),
            dense=_PairDense(run, i, ics[i]),
            aborted=run.aborted.get(i),
        ))
    return pairs


def integrate_pair(
    cfg: TwoPhotonConfig,
    field: VelocityField | None,
    x10: float,
    x20: float,
    t0: float,
    t1: float,
    opts: IntegratorOptions | None = None,
) -> TrajectoryPair:
    """
    Integrate one pair from (x10, x20) at t0 to t1.

    Parameters
    ----------
    cfg   : Packet configuration (used to build the optical KG field when
            `field` is None).
    field : Velocity field to follow.
    opts  : Integrator options; defaults to IntegratorOptions().

    Raises
    ------
    InvalidParameter : t1 <= t0 or x10 == x20.
    NodeEncounter    : the field stayed singular through every retry.
    StepUnderflow    : adaptive step below opts.min_step.
    """
    field = field or OpticalField(cfg)
    return integrate_batch(field, np.array([[x10, x20]]), t0, t1, opts, truncate=False)[0]


def integrate_ensemble(
    source: TwoPhotonConfig | VelocityField,
    ics: np.ndarray,
    t0: float,
    t1: float,
    opts: IntegratorOptions | None = None,
    seed: int | None = None,
) -> Ensemble:
    """
    Integrate every pair of `ics` in batches on a thread pool; output is ordered by pair index.

    Pairs stopped by a singularity stay in the ensemble, truncated; their
    diagnostics are listed under meta["aborted"]. meta["integrator"] sums the
    integrator statistics of every batch.
    """
    field = _field(source)
    opts = opts or IntegratorOptions()
    ics = _check_ics(ics, t0, t1)
    start = time.monotonic()
    logger.info("integrate_ensemble: %d pairs over [%.3g, %.3g] with %s", ics.shape[0], t0, t1, field.name)

    batches = _batches(ics, opts.batch_size)
    results = parallel_map(lambda batch: integrate_batch(field, batch, t0, t1, opts), batches)
    pairs: list[TrajectoryPair] = []
    stats = IntegratorStats()
    for batch in results:
        stats = stats.merge(batch[0].stats)
        for pair in batch:
            pair.pair_id = len(pairs)
            pairs.append(pair)
    aborted = [{"pair_id": p.pair_id, **p.aborted} for p in pairs if p.aborted is not None]

    duration_ms = int((time.monotonic() - start) * 1000)
    logger.info(
        "integrate_ensemble: completed %d pairs (%d truncated, %d steps, %d rejected) in %dms",
        len(pairs), len(aborted), stats.steps, stats.rejected, duration_ms,
    )
    meta = {**field.describe(), "t1": t1, "integrator": asdict(stats), "aborted": aborted}
    return Ensemble(pairs=pairs, seed=seed, t0=t0, cfg=field.cfg, meta=meta)


def sample_initial(source: TwoPhotonConfig | VelocityField, t0: float, n: int, seed: int | None) -> np.ndarray:
    """n pairs (x1 < x2) drawn from |ψ(t0, ·, ·)|²."""
    return sample_pairs(_field(source), t0, n, seed)


def sample_conditional(
    source: TwoPhotonConfig | VelocityField, t0: float, x1_fixed: float, n: int, seed: int | None
) -> np.ndarray:
    """n pairs with x1 = x1_fixed and x2 drawn from |ψ(t0, x1_fixed, ·)|²."""
    return sample_conditional_x2(_field(source), t0, x1_fixed, n, seed)


def run_ensemble(
    source: TwoPhotonConfig | VelocityField,
    t0: float,
    t1: float,
    n: int,
    seed: int,
    opts: IntegratorOptions | None = None,
    x1_fixed: float | None = None,
) -> Ensemble:
    """Sample initial conditions and integrate them."""
    field = _field(source)
    if x1_fixed is None:
        ics = sample_initial(field, t0, n, seed)
    else:
        ics = sample_conditional(field, t0, x1_fixed, n, seed)
    return integrate_ensemble(field, ics, t0, t1, opts, seed=seed)


def _positions(pair: TrajectoryPair, t: FloatOrArray) -> tuple[np.ndarray, np.ndarray]:
    """(x1, x2) at t from the continuous extension, or Hermite interpolation of the samples."""
    if pair.dense is not None:
        x1, x2 = pair.dense(t)
        return np.asarray(x1), np.asarray(x2)
    spline = CubicHermiteSpline(pair.t, np.vstack([pair.x1, pair.x2]), np.vstack([pair.v1, pair.v2]), axis=1)
    y = spline(t)
    return y[0], y[1]


def snapshot(ens: Ensemble, t: float) -> np.ndarray:
    """
    Positions (x1, x2) of every pair at time t, shape (n, 2).

    Rows of pairs truncated before t are NaN.

    Raises
    ------
    OutOfSpan : t outside a pair's integration span.
    """
    out = np.empty((len(ens), 2))
    slack = 1e-12 * max(1.0, abs(t))
    for i, pair in enumerate(ens.pairs):
        lo, hi = min(pair.t0, pair.t1), max(pair.t0, pair.t1)
        if pair.aborted is not None:
            hi = float(ens.meta.get("t1", hi))
        if t < lo - slack or t > hi + slack:
            raise OutOfSpan(f"t={t} outside pair {pair.pair_id} span [{lo}, {hi}]")
        if t == pair.t0:
            out[i] = pair.x1[0], pair.x2[0]
        elif t > pair.t1 + slack:
            out[i] = np.nan
        else:
            x1, x2 = _positions(pair, min(max(t, lo), pair.t1))
            out[i] = float(x1), float(x2)
    missing = int(np.count_nonzero(np.isnan(out[:, 0])))
    if missing:
        logger.info("snapshot: %d of %d pairs truncated before t=%.6g", missing, len(ens), t)
    return out


# ─── Boosted frames ───────────────────────────────────────────────────────────

def map_pairs(b: Boost, pairs: Sequence[TrajectoryPair]) -> list[BoostedPair]:
    """Pointwise image of original-frame worldlines, parametrised by original time."""
    out = []
    for p in pairs:
        e1 = boost_event(b, Event(p.t, p.x1))
        e2 = boost_event(b, Event(p.t, p.x2))
        out.append(BoostedPair(p.t.copy(), e1.t, e1.x, e2.t, e2.x, BoostPath.MAPPED.value, p.pair_id, p.stats, p.aborted))
    return out


def _reintegrate_batch(
    cfg: TwoPhotonConfig, b: Boost, ics: np.ndarray, t0: float, t1: float, opts: IntegratorOptions
) -> list[BoostedPair]:
    """
    Integrate in primed coordinates with the redshifted packets, parametrised
    by original-frame time τ:

        dt_i'/dτ = ρ_i' / (γ(ρ_i' + θj_i')),   dx_i'/dτ = j_i' / (γ(ρ_i' + θj_i'))

    with the currents evaluated at the primed multitime point. The denominator
    equals the original-frame ρ_i, so the system stays regular where ρ_i' = 0;
    a pair whose original density vanishes is cut there like in the original frame.
    """
    cfg_b = redshift_packets(b, cfg)
    g, th = b.gamma, b.theta
    thr = node_threshold(cfg)
    n = ics.shape[0]
    e1 = boost_event(b, Event(np.full(n, t0), ics[:, 0]))
    e2 = boost_event(b, Event(np.full(n, t0), ics[:, 1]))

    def make_rhs(m: int):
        def rhs(tau: float, y: np.ndarray) -> np.ndarray:
            T1, X1, T2, X2 = y.reshape(4, m)
            parts = []
            for c in currents(cfg_b, MultiPoint.of(T1, X1, T2, X2)):
                den = g * (c.rho + th * c.j)
                parts.append(np.atleast_1d(guarded_ratio(c.rho, den, thr, True, "reintegrated dt'")))
                parts.append(np.atleast_1d(guarded_ratio(c.j, den, thr, True, "reintegrated dx'")))
            return np.concatenate(parts)
        return rhs

    def worst(tau: float, state: np.ndarray) -> int:
        # smallest original-frame density among the two particles
        dens = [np.abs(np.atleast_1d(g * (c.rho + th * c.j))) for c in currents(cfg_b, MultiPoint.of(*state))]
        low = np.minimum(dens[0], dens[1])
        return int(np.argmin(np.where(np.isfinite(low), low, 0.0)))

    y0 = np.vstack([e1.t, e1.x, e2.t, e2.x])
    run = _integrate_retiring(opts, make_rhs, y0, t0, t1, worst, True, "reintegrate")
    return [
        BoostedPair(t, y[0].copy(), y[1].copy(), y[2].copy(), y[3].copy(),
                    BoostPath.REINTEGRATED.value, i, run.stats, run.aborted.get(i))
        for i, (t, y) in enumerate(run.sample(sample_grid(t0, t1, opts.sample_dt), y0))
    ]


def _equal_time_pair(
    cfg_b: TwoPhotonConfig, b: Boost, x10: float, x20: float, t0: float, t_end: float, opts: IntegratorOptions
) -> BoostedPair | None:
    """
    Equal-t' integration after bringing the earlier-starting particle to the
    common start t' with its partner held at its own boosted start event.
    None when the common window is empty or the lead-in leg cannot be completed.
    """
    s1 = boost_event(b, Event(t0, x10))
    s2 = boost_event(b, Event(t0, x20))
    t_start = float(max(s1.t, s2.t))
    x1s, x2s = float(s1.x), float(s2.x)

    lag = abs(float(s1.t) - float(s2.t))
    if lag > 1e-12:
        if s1.t < s2.t:
            lead, lead_idx, t_from, x_from = s2, 0, float(s1.t), x1s
        else:
            lead, lead_idx, t_from, x_from = s1, 1, float(s2.t), x2s

        def leg(t: float, y: np.ndarray) -> np.ndarray:
            if lead_idx == 0:
                mp = MultiPoint.of(t, y[0], float(lead.t), float(lead.x))
            else:
                mp = MultiPoint.of(float(lead.t), float(lead.x), t, y[0])
            v = velocity_kg(cfg_b, mp, strict=True)[lead_idx]
            return np.atleast_1d(v)

        leg_sol = _run(opts, leg, t_from, np.array([x_from]), t_start, 1, truncate=True)
        if not leg_sol.complete:
            logger.warning("equal_time: lead-in leg from t'=%.6g stopped (%s)", t_from, leg_sol.aborted)
            return None
        if lead_idx == 0:
            x1s = float(leg_sol.y[0, -1])
        else:
            x2s = float(leg_sol.y[0, -1])

    if not t_end > t_start or x1s == x2s:
        return None
    pair = integrate_batch(OpticalField(cfg_b), np.array([[x1s, x2s]]), t_start, t_end, opts)[0]
    return BoostedPair(
        pair.t, pair.t.copy(), pair.x1, pair.t.copy(), pair.x2, BoostPath.EQUAL_TIME.value, 0, pair.stats, pair.aborted
    )


def integrate_boosted(
    cfg: TwoPhotonConfig,
    b: Boost,
    ics: np.ndarray,
    t0: float,
    t1: float,
    opts: IntegratorOptions | None = None,
    paths: Sequence[BoostPath | str] = (BoostPath.MAPPED, BoostPath.REINTEGRATED),
    original: Ensemble | None = None,
) -> dict[BoostPath, list[BoostedPair]]:
    """
    Worldlines of original-frame initial conditions seen from the boosted frame.

    Parameters
    ----------
    ics      : (n, 2) positions at original time t0.
    paths    : Which constructions to run (MAPPED, REINTEGRATED, EQUAL_TIME).
    original : Already integrated original-frame ensemble for these ics.

    Returns
    -------
    dict BoostPath -> list of BoostedPair, ordered by pair index. EQUAL_TIME
    omits pairs whose common t' window is empty. Pairs stopped by a singularity
    are truncated and carry the diagnostic in `aborted`.
    """
    opts = opts or IntegratorOptions()
    ics = _check_ics(ics, t0, t1)
    wanted = [BoostPath(p) for p in paths]
    out: dict[BoostPath, list[BoostedPair]] = {}
    start = time.monotonic()

    mapped: list[BoostedPair] | None = None
    if BoostPath.MAPPED in wanted or BoostPath.EQUAL_TIME in wanted:
        ens = original or integrate_ensemble(OpticalField(cfg), ics, t0, t1, opts)
        mapped = map_pairs(b, ens.pairs)
        if BoostPath.MAPPED in wanted:
            out[BoostPath.MAPPED] = mapped

    if BoostPath.REINTEGRATED in wanted:
        batches = _batches(ics, opts.batch_size)
        results = parallel_map(lambda bt: _reintegrate_batch(cfg, b, bt, t0, t1, opts), batches)
        pairs = [p for batch in results for p in batch]
        for i, p in enumerate(pairs):
            p.pair_id = i
        out[BoostPath.REINTEGRATED] = pairs

    if BoostPath.EQUAL_TIME in wanted:
        cfg_b = redshift_packets(b, cfg)
        equal: list[BoostedPair] = []
        for i, (x10, x20) in enumerate(ics):
            m = mapped[i]
            t_end = float(min(m.t1[-1], m.t2[-1]))
            bp = _equal_time_pair(cfg_b, b, float(x10), float(x20), t0, t_end, opts)
            if bp is not None:
                bp.pair_id = i
                equal.append(bp)
        out[BoostPath.EQUAL_TIME] = equal

    logger.info(
        "integrate_boosted: theta=%.3g, %d pairs, paths=%s, truncated=%s in %dms",
        b.theta, ics.shape[0], [p.value for p in wanted],
        {p.value: sum(bp.aborted is not None for bp in out[p]) for p in wanted},
        int((time.monotonic() - start) * 1000),
    )
    return out


def path_discrepancy(reference: Sequence[BoostedPair], other: Sequence[BoostedPair]) -> float:
    """
    Largest spacetime discrepancy between two boosted constructions.

    Pairs sharing a τ grid are compared at the τ samples both reached, so a
    truncated pair counts up to its stop. Equal-time pairs are compared in x'
    at common t' by interpolating the reference worldlines (skipped where the
    reference t' is not monotone).
    """
    by_id = {p.pair_id: p for p in reference}
    worst = 0.0
    for p in other:
        ref = by_id.get(p.pair_id)
        if ref is None:
            continue
        if p.path != BoostPath.EQUAL_TIME.value:
            _, ia, ib = np.intersect1d(ref.tau, p.tau, assume_unique=True, return_indices=True)
            if ia.size:
                diff = np.abs(ref.rows()[ia, 1:] - p.rows()[ib, 1:])
                worst = max(worst, float(np.max(diff)))
            continue
        for t_ref, x_ref, x_eq in ((ref.t1, ref.x1, p.x1), (ref.t2, ref.x2, p.x2)):
            if np.any(np.diff(t_ref) <= 0):
                continue
            inside = (p.tau >= t_ref[0]) & (p.tau <= t_ref[-1])
            if np.any(inside):
                worst = max(worst, float(np.max(np.abs(np.interp(p.tau[inside], t_ref, x_ref) - x_eq[inside]))))
    return worst


def backwards_segments(bp: BoostedPair) -> list[tuple[int, int, int]]:
    """(particle, start, stop) sample ranges along which the boosted time t_i' decreases."""
    segments = []
    for particle, t in ((1, bp.t1), (2, bp.t2)):
        dec = np.diff(t) < 0
        idx = 0
        while idx < dec.size:
            if dec[idx]:
                stop = idx
                while stop < dec.size and dec[stop]:
                    stop += 1
                segments.append((particle, idx, stop))
                idx = stop
            else:
                idx += 1
    return segments


def field_backwards_onset(
    cfg: TwoPhotonConfig, b: Boost, t: np.ndarray, x1: np.ndarray, x2: np.ndarray
) -> dict[str, float]:
    """
    Count equal-time field points where the boosted density ρ_i' = γ(ρ_i - θj_i)
    is negative (velocity beyond 1/θ); nodes of the original density are excluded.
    """
    mp = MultiPoint.of(t, x1, t, x2)
    thr = node_threshold(cfg)
    out: dict[str, float] = {}
    for i, c in enumerate(currents(cfg, mp), start=1):
        rho_b = np.asarray(boost_current(b, c).rho)
        valid = np.abs(np.asarray(c.rho)) >= thr
        neg = (rho_b < 0) & valid
        out[f"negative_rho{i}"] = float(np.count_nonzero(neg))
        if np.any(neg):
            k = np.unravel_index(int(np.argmax(neg)), neg.shape)
            out[f"first_t{i}"] = float(np.broadcast_to(t, neg.shape)[k])
            out[f"first_x1_{i}"] = float(np.broadcast_to(x1, neg.shape)[k])
            out[f"first_x2_{i}"] = float(np.broadcast_to(x2, neg.shape)[k])
    return out


def trajectory_backwards_onset(
    cfg: TwoPhotonConfig, b: Boost, pairs: Sequence[TrajectoryPair], refine: int = 10
) -> list[dict[str, float]]:
    """
    Intervals along original-frame trajectories where the boosted density
    ρ_i' = γ(ρ_i - θj_i) is negative, i.e. where the boosted time of photon i
    runs backwards. Each pair is resampled `refine` times finer than its grid.
    """
    thr = node_threshold(cfg)
    found: list[dict[str, float]] = []
    for pair in pairs:
        t = np.linspace(pair.t0, pair.t1, refine * (len(pair) - 1) + 1)
        x1, x2 = _positions(pair, t)
        for particle, c in enumerate(currents(cfg, MultiPoint.of(t, x1, t, x2)), start=1):
            rho_b = np.asarray(boost_current(b, c).rho)
            neg = (rho_b < 0) & (np.abs(np.asarray(c.rho)) >= thr)
            if not np.any(neg):
                continue
            edges = np.flatnonzero(np.diff(np.concatenate([[0], neg.astype(np.int8), [0]])))
            for start, stop in zip(edges[::2], edges[1::2]):
                found.append({
                    "pair_id": float(pair.pair_id),
                    "particle": float(particle),
                    "t_start": float(t[start]),
                    "t_end": float(t[stop - 1]),
                    "min_rho": float(rho_b[start:stop].min()),
                })
    return found
