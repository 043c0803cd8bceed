"""
bohmsim/checks/dynamics.py
Checks on integrated trajectories: non-crossing and mirror symmetry, the
boosted-frame constructions, backwards-in-time onset and Bohmian transport.
"""
from __future__ import annotations

import logging

import numpy as np

from bohmsim.checks.base import BaseCheck, finite_max, key
from bohmsim.engine.trajectories import (
    BoostPath,
    backwards_segments,
    field_backwards_onset,
    integrate_boosted,
    integrate_ensemble,
    path_discrepancy,
    run_ensemble,
    sample_initial,
    snapshot,
    trajectory_backwards_onset,
)
from bohmsim.models.current import Boost
from bohmsim.models.event import EqualTimePoint
from bohmsim.models.packet import TwoPhotonConfig
from bohmsim.physics.fields import OpticalField, build_field
from bohmsim.physics.kg_dynamics import foliation_commutator
from bohmsim.tools.sampling import chi_square_transport

logger = logging.getLogger(__name__)

# symmetric initial conditions (-x, x) integrated for the mirror check
MIRROR_STARTS = (2.0, 1.5, 1.0, 0.5)


def _seed(check: BaseCheck) -> int:
    return check.run_cfg.ensemble.seed if check.run_cfg.ensemble else 0


def _symmetric(cfg: TwoPhotonConfig) -> TwoPhotonConfig:
    return cfg if cfg.indistinguishable else TwoPhotonConfig.symmetric(cfg.right.center, cfg.right.width)


class SymmetryCheck(BaseCheck):
    """
    Pairs never cross, and for equal packets the field satisfies
    v1(t, x1, x2) = -v2(t, -x2, -x1), so symmetric starts stay on x1 = -x2.
    """

    name = "symmetry"

    def evaluate(self):
        cfg = _symmetric(self.cfg)
        window = self.run_cfg.time
        opts = self.run_cfg.integrator
        field = OpticalField(cfg)
        n = self.run_cfg.ensemble.n if self.run_cfg.ensemble else 200

        ens = run_ensemble(field, window.t0, window.t1, n, _seed(self), opts)
        min_sep = min(p.min_separation for p in ens.pairs)

        starts = np.array([[-x, x] for x in MIRROR_STARTS])
        mirror = integrate_ensemble(field, starts, window.t0, window.t1, opts)
        drift = max(float(np.max(np.abs(p.x1 + p.x2))) for p in mirror.pairs)

        t, x1, x2 = self.run_cfg.grid.mesh()
        v1, _ = field.velocity(t, x1, x2, strict=False)
        _, v2m = field.velocity(t, -x2, -x1, strict=False)
        field_err = finite_max(np.abs(v1 + v2m) / np.maximum(1.0, np.abs(v1)))

        metrics = {
            "min_separation": min_sep,
            "mirror_drift": drift,
            "field_antisymmetry": field_err,
            "pairs": float(n),
            "truncated_pairs": float(len(ens.meta["aborted"]) + len(mirror.meta["aborted"])),
        }
        passed = min_sep > 0.0 and drift < self.tol.symmetry and field_err < self.tol.equivalence
        return passed, metrics, None, {"mirror_starts": list(MIRROR_STARTS)}


class BoostPathsCheck(BaseCheck):
    """
    Pointwise-boosted worldlines against fresh integration in the boosted
    frame. The equal-t' construction is reported alongside with the size of
    the foliation commutator that separates it from the other two.
    """

    name = "boost_paths"

    def evaluate(self):
        window = self.run_cfg.time
        opts = self.run_cfg.integrator
        ics = sample_initial(self.cfg, window.t0, self.spec.bundle_pairs, _seed(self))
        metrics: dict[str, float] = {}
        passed = True

        for theta in self.spec.path_thetas:
            paths = integrate_boosted(
                self.cfg, Boost(theta), ics, window.t0, window.t1, opts,
                paths=(BoostPath.MAPPED, BoostPath.REINTEGRATED, BoostPath.EQUAL_TIME),
            )
            mapped = paths[BoostPath.MAPPED]
            reintegrated = path_discrepancy(mapped, paths[BoostPath.REINTEGRATED])
            metrics[key("reintegrated_theta", theta)] = reintegrated
            metrics[key("equal_time_theta", theta)] = path_discrepancy(mapped, paths[BoostPath.EQUAL_TIME])
            metrics[key("equal_time_pairs_theta", theta)] = float(len(paths[BoostPath.EQUAL_TIME]))
            metrics[key("truncated_pairs_theta", theta)] = float(
                sum(bp.aborted is not None for path in paths.values() for bp in path)
            )
            passed &= reintegrated < self.tol.boost_paths

        t, x1, x2 = self.run_cfg.grid.mesh()
        d2v1, d1v2 = foliation_commutator(self.cfg, EqualTimePoint(t, x1, x2))
        metrics["foliation_commutator"] = max(finite_max(np.abs(d2v1)), finite_max(np.abs(d1v2)))
        return passed, metrics, None, {"pairs": self.spec.bundle_pairs, "thetas": self.spec.path_thetas}


class BackwardsOnsetCheck(BaseCheck):
    """At a large enough boost some worldline segments run backwards in boosted time."""

    name = "backwards_onset"

    def evaluate(self):
        window = self.run_cfg.time
        opts = self.run_cfg.integrator
        b = Boost(self.spec.backwards_theta)
        ics = sample_initial(self.cfg, window.t0, self.spec.backwards_pairs, _seed(self))
        ens = integrate_ensemble(self.cfg, ics, window.t0, window.t1, opts)

        mapped = integrate_boosted(self.cfg, b, ics, window.t0, window.t1, opts, paths=(BoostPath.MAPPED,), original=ens)
        segments = [s for bp in mapped[BoostPath.MAPPED] for s in backwards_segments(bp)]
        onsets = trajectory_backwards_onset(self.cfg, b, ens.pairs)

        t, x1, x2 = self.run_cfg.grid.mesh()
        field = field_backwards_onset(self.cfg, b, t, x1, x2)

        metrics = {
            "sampled_segments": float(len(segments)),
            "negative_density_intervals": float(len(onsets)),
            "field_points": field.get("negative_rho1", 0.0) + field.get("negative_rho2", 0.0),
        }
        worst = None
        if onsets:
            first = min(onsets, key=lambda o: o["min_rho"])
            worst = {k: float(v) for k, v in first.items()}
        passed = bool(segments) or bool(onsets)
        return passed, metrics, worst, {"theta": b.theta, "pairs": self.spec.backwards_pairs}


class TransportCheck(BaseCheck):
    """
    An ensemble sampled from |ψ|² at t0 and carried by the velocity field stays
    |ψ|²-distributed: chi-square at every snapshot time.
    """

    name = "transport"

    def _size(self) -> tuple[int, int]:
        return self.spec.transport_pairs, self.spec.transport_bins

    def evaluate(self):
        n, bins = self._size()
        window = self.run_cfg.time
        field = build_field(self.cfg, self.run_cfg.dispersion, self.run_cfg.kz, self.run_cfg.route)
        times = [t for t in self.run_cfg.snapshot_times if window.t0 <= t <= window.t1]

        t_end = max(times, default=window.t1)
        ens = run_ensemble(field, window.t0, t_end if t_end > window.t0 else window.t1, n, _seed(self), self.run_cfg.integrator)
        metrics: dict[str, float] = {}
        passed = True
        for t in times:
            result = chi_square_transport(field, t, snapshot(ens, t), bins=bins, alpha=self.tol.chi2_alpha)
            metrics[key("pvalue_t", t)] = result["pvalue"]
            metrics[key("statistic_t", t)] = result["statistic"]
            metrics[key("dropped_t", t)] = result["dropped"]
            passed &= bool(result["passed"])
        return passed, metrics, None, {"pairs": n, "bins": bins, "times": times, "field": field.name}


class TransportFullCheck(TransportCheck):
    """Transport at 10⁵ pairs binned 40 × 40; opt-in."""

    name = "transport_full"
    slow = True

    def _size(self) -> tuple[int, int]:
        return 100_000, 40
