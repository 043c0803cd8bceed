import numpy as np
import pytest

from bohmsim.engine.trajectories import (
    BoostPath,
    backwards_segments,
    integrate_boosted,
    integrate_ensemble,
    integrate_pair,
    map_pairs,
    path_discrepancy,
    run_ensemble,
    sample_initial,
    snapshot,
    trajectory_backwards_onset,
)
from bohmsim.errors import InvalidParameter, NodeEncounter, OutOfSpan, StepUnderflow
from bohmsim.models.current import Boost
from bohmsim.models.trajectory import BoostedPair
from bohmsim.physics.fields import ParaxialField, VelocityField
from bohmsim.schemas.base import IntegratorOptions


def test_free_flight_before_the_packets_meet(cfg20):
    pair = integrate_pair(cfg20, None, -2.0, 2.0, -2.0, -1.5)
    assert np.max(np.abs(pair.x1 - (-2.0 + (pair.t + 2.0)))) < 1e-6
    assert np.max(np.abs(pair.x2 - (2.0 - (pair.t + 2.0)))) < 1e-6
    assert np.allclose(pair.v1, 1.0, atol=1e-6) and np.allclose(pair.v2, -1.0, atol=1e-6)


@pytest.mark.parametrize("x0", [2.0, 1.0, 0.5])
def test_mirror_symmetric_starts_stay_symmetric(cfg20, x0):
    pair = integrate_pair(cfg20, None, -x0, x0, -2.0, 2.0)
    assert np.max(np.abs(pair.x1 + pair.x2)) < 1e-6
    assert pair.min_separation > 0.0


def test_sampled_pairs_never_cross(cfg20, fast_opts):
    ens = run_ensemble(cfg20, -2.0, 2.0, 12, seed=1, opts=fast_opts)
    assert len(ens) == 12
    assert [p.pair_id for p in ens.pairs] == list(range(12))
    assert min(p.min_separation for p in ens.pairs) > 0.0
    assert ens.meta["t1"] == 2.0


def test_ensembles_are_reproducible(cfg20, fast_opts):
    a = run_ensemble(cfg20, -2.0, 0.0, 6, seed=5, opts=fast_opts)
    b = run_ensemble(cfg20, -2.0, 0.0, 6, seed=5, opts=fast_opts)
    for pa, pb in zip(a.pairs, b.pairs):
        assert np.array_equal(pa.x1, pb.x1) and np.array_equal(pa.x2, pb.x2)


def test_batching_does_not_change_pair_order(cfg20):
    ics = sample_initial(cfg20, -2.0, 5, seed=3)
    small = integrate_ensemble(cfg20, ics, -2.0, -1.0, IntegratorOptions(batch_size=2))
    assert np.allclose(small.initial_positions(), ics)


def test_ensemble_meta_sums_batch_statistics(cfg20, fast_opts):
    ics = sample_initial(cfg20, -2.0, 5, seed=3)
    ens = integrate_ensemble(cfg20, ics, -2.0, -1.0, fast_opts.model_copy(update={"batch_size": 2}))
    per_batch = [ens.pairs[i].stats for i in (0, 2, 4)]
    assert ens.pairs[0].stats is ens.pairs[1].stats
    for name in ("steps", "rejected", "nfev", "node_retries"):
        assert ens.meta["integrator"][name] == sum(getattr(s, name) for s in per_batch)
    assert ens.meta["aborted"] == []


def test_tolerance_halving_converges(cfg20):
    coarse = integrate_pair(cfg20, None, -2.1, 1.7, -2.0, 1.0, IntegratorOptions(tol=1e-9, rtol=1e-9))
    fine = integrate_pair(cfg20, None, -2.1, 1.7, -2.0, 1.0, IntegratorOptions(tol=5e-10, rtol=5e-10))
    assert abs(coarse.x1[-1] - fine.x1[-1]) < 1e-6
    assert abs(coarse.x2[-1] - fine.x2[-1]) < 1e-6


def test_invalid_initial_conditions(cfg20):
    with pytest.raises(InvalidParameter):
        integrate_pair(cfg20, None, 0.5, 0.5, -2.0, 0.0)
    with pytest.raises(InvalidParameter):
        integrate_pair(cfg20, None, -2.0, 2.0, 0.0, -1.0)


class SinkField(VelocityField):
    """Photon 1 reaches x1 = 1 in finite time: (1 - x1)² = (1 - x10)² - (t - t0)."""

    name = "sink"

    def velocity(self, t, x1, x2, strict=True):
        x1 = np.asarray(x1, dtype=float)
        return 0.5 / (1.0 - x1), np.zeros_like(np.asarray(x2, dtype=float))

    def density(self, t, x1, x2):
        return np.ones(np.broadcast(t, x1, x2).shape)

    def marginal(self, packet, t):
        return 0.0, 1.0


def test_a_diverging_pair_is_retired_and_the_rest_complete(cfg20, fast_opts):
    ics = np.array([[-3.0, 2.0], [0.5, 2.0], [-4.0, 3.0]])
    ens = integrate_ensemble(SinkField(cfg20), ics, 0.0, 1.0, fast_opts)

    assert [d["pair_id"] for d in ens.meta["aborted"]] == [1]
    stuck = ens.pairs[1]
    assert stuck.aborted["t"] == pytest.approx(0.25, abs=1e-3)
    assert stuck.aborted["reason"].startswith(("StepUnderflow", "NodeEncounter"))
    assert stuck.t[-1] == stuck.aborted["t"] and stuck.t[-1] < 1.0

    for i in (0, 2):
        pair = ens.pairs[i]
        assert pair.aborted is None and pair.t[-1] == 1.0
        expected = 1.0 - np.sqrt((1.0 - ics[i, 0]) ** 2 - pair.t)
        assert np.max(np.abs(pair.x1 - expected)) < 1e-6

    snap = snapshot(ens, 0.5)
    assert np.all(np.isnan(snap[1]))
    assert np.all(np.isfinite(snap[[0, 2]]))
    assert snap[0, 0] == pytest.approx(1.0 - np.sqrt(15.5), abs=1e-6)
    assert ens.meta["integrator"]["steps"] > 0


def test_single_pair_integration_still_raises_at_a_singularity(cfg20, fast_opts):
    with pytest.raises((StepUnderflow, NodeEncounter)):
        integrate_pair(cfg20, SinkField(cfg20), 0.5, 2.0, 0.0, 1.0, fast_opts)


def test_ensemble_through_the_overlap_completes(cfg20):
    # the first start runs into a vanishing photon-1 density shortly before t = 0
    ics = np.array([[-0.9433, 2.0560], [-2.0, 2.0]])
    ens = integrate_ensemble(cfg20, ics, -2.0, 0.0)
    assert len(ens) == 2 and len(ens.meta["aborted"]) <= 1
    for diag in ens.meta["aborted"]:
        assert diag["pair_id"] == 0 and -2.0 < diag["t"] < 0.0
    assert ens.pairs[1].aborted is None and ens.pairs[1].t[-1] == 0.0
    assert snapshot(ens, -1.0).shape == (2, 2)


def test_two_hundred_sampled_pairs_never_cross(cfg20):
    ens = run_ensemble(cfg20, -2.0, 2.0, 200, seed=0)
    assert len(ens) == 200
    assert min(p.min_separation for p in ens.pairs) > 0.0
    assert ens.meta["integrator"]["steps"] >= len(ens.pairs) // IntegratorOptions().batch_size


def test_snapshots(cfg20, fast_opts):
    ics = sample_initial(cfg20, -2.0, 4, seed=8)
    ens = integrate_ensemble(cfg20, ics, -2.0, 0.0, fast_opts)
    assert np.array_equal(snapshot(ens, -2.0), ics)
    mid = snapshot(ens, -1.0)
    k = int(np.argmin(np.abs(ens.pairs[0].t + 1.0)))
    assert np.allclose(mid[0], [ens.pairs[0].x1[k], ens.pairs[0].x2[k]], atol=1e-12)
    with pytest.raises(OutOfSpan):
        snapshot(ens, 0.5)


def test_snapshot_without_dense_output(cfg20, fast_opts):
    ens = integrate_ensemble(cfg20, np.array([[-2.0, 2.0]]), -2.0, -1.5, fast_opts)
    ens.pairs[0].dense = None
    x1, x2 = snapshot(ens, -1.755)[0]
    assert x1 == pytest.approx(-1.755, abs=1e-6)
    assert x2 == pytest.approx(1.755, abs=1e-6)


def test_paraxial_ensemble_follows_the_packets(cfg20, fast_opts):
    field = ParaxialField(cfg20, 200.0)
    ens = run_ensemble(field, 10.0, 20.0, 16, seed=4, opts=fast_opts)
    end = snapshot(ens, 20.0)
    assert np.all(end[:, 0] < end[:, 1])
    assert end[:, 1].mean() == pytest.approx(2.0, abs=0.5)


# ─── boosted frames ──────────────────────────────────────────────────────────

def test_mapped_pairs_at_zero_boost_are_the_originals(cfg20, fast_opts):
    ens = integrate_ensemble(cfg20, np.array([[-2.0, 2.0]]), -2.0, -1.0, fast_opts)
    bp = map_pairs(Boost(0.0), ens.pairs)[0]
    assert np.array_equal(bp.t1, ens.pairs[0].t) and np.array_equal(bp.x2, ens.pairs[0].x2)


def test_reintegrated_path_agrees_with_mapped_path(cfg20):
    ics = sample_initial(cfg20, -2.0, 3, seed=21)
    paths = integrate_boosted(cfg20, Boost(0.4), ics, -2.0, 0.5)
    assert set(paths) == {BoostPath.MAPPED, BoostPath.REINTEGRATED}
    assert path_discrepancy(paths[BoostPath.MAPPED], paths[BoostPath.REINTEGRATED]) < 1e-5


def test_equal_time_path_at_zero_boost(cfg20):
    ics = np.array([[-2.0, 2.0], [-1.8, 2.3]])
    paths = integrate_boosted(cfg20, Boost(0.0), ics, -2.0, -0.5, paths=(BoostPath.MAPPED, BoostPath.EQUAL_TIME))
    equal = paths[BoostPath.EQUAL_TIME]
    assert [p.pair_id for p in equal] == [0, 1]
    assert path_discrepancy(paths[BoostPath.MAPPED], equal) < 1e-6


def test_equal_time_path_runs_in_a_boosted_frame(cfg20):
    paths = integrate_boosted(cfg20, Boost(0.3), np.array([[-2.0, 2.0]]), -2.0, 0.0, paths=(BoostPath.EQUAL_TIME,))
    (bp,) = paths[BoostPath.EQUAL_TIME]
    assert np.array_equal(bp.t1, bp.t2)
    assert bp.path == "equal_time"
    if bp.aborted is not None:
        assert bp.tau[-1] == bp.aborted["t"]


def test_backwards_segments():
    t = np.array([0.0, 1.0, 0.5, 0.2, 1.5, 2.0])
    bp = BoostedPair(t, t, t, np.arange(6.0), t, "mapped")
    assert backwards_segments(bp) == [(1, 1, 3)]


def test_path_discrepancy_of_identical_paths():
    tau = np.linspace(0.0, 1.0, 5)
    bp = BoostedPair(tau, tau, -tau, tau, tau, "mapped")
    assert path_discrepancy([bp], [bp]) == 0.0


def test_large_boosts_run_some_worldlines_backwards(cfg20, fast_opts):
    ens = run_ensemble(cfg20, -2.0, 2.0, 24, seed=0, opts=fast_opts)
    onsets = trajectory_backwards_onset(cfg20, Boost(0.6), ens.pairs)
    assert onsets
    first = onsets[0]
    assert first["min_rho"] < 0.0
    assert first["t_start"] <= first["t_end"]
