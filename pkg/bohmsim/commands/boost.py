"""
bohmsim/commands/boost.py
`boost` subcommand: worldlines of the configured pairs seen from a frame
moving at theta, through the mapped, reintegrated and equal-time constructions.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

import numpy as np

from bohmsim.commands.common import field_for, initial_conditions, output_dir, require_optical
from bohmsim.engine.trajectories import (
    BoostPath,
    backwards_segments,
    integrate_boosted,
    path_discrepancy,
)
from bohmsim.errors import ConfigError
from bohmsim.models.trajectory import BoostedPair
from bohmsim.schemas.base import RunConfig
from bohmsim.tools.export import write_csv, write_json

logger = logging.getLogger(__name__)

BOOSTED_COLUMNS = ("pair_id", "tau", "t1", "x1", "t2", "x2")


def boosted_rows(pairs: list[BoostedPair]) -> np.ndarray:
    blocks = [np.column_stack([np.full(p.tau.shape[0], p.pair_id), p.rows()]) for p in pairs]
    return np.concatenate(blocks) if blocks else np.empty((0, len(BOOSTED_COLUMNS)))


def cmd_boost(run: RunConfig, out: str | None = None, equal_time: bool = True) -> list[Path]:
    """
    Raises
    ------
    ConfigError : no theta configured, or a non-optical dispersion.
    """
    b = run.boost()
    if b is None:
        raise ConfigError("boost: theta is required (--theta or config 'theta')")
    require_optical(run, "boost")
    ics = initial_conditions(run, field_for(run))
    wanted = [BoostPath.MAPPED, BoostPath.REINTEGRATED] + ([BoostPath.EQUAL_TIME] if equal_time else [])
    paths = integrate_boosted(run.two_photon(), b, ics, run.time.t0, run.time.t1, run.integrator, paths=wanted)

    directory = output_dir(run, out)
    written = [
        write_csv(directory / f"boosted_{path.value}.csv", BOOSTED_COLUMNS, boosted_rows(pairs), int_columns=1)
        for path, pairs in paths.items()
    ]
    mapped = paths[BoostPath.MAPPED]
    summary = {
        "theta": b.theta,
        "gamma": b.gamma,
        "pairs": len(mapped),
        "discrepancy": {
            path.value: path_discrepancy(mapped, pairs) for path, pairs in paths.items() if path is not BoostPath.MAPPED
        },
        "backwards_segments": [
            {"pair_id": bp.pair_id, "particle": particle, "start": start, "stop": stop}
            for bp in mapped
            for particle, start, stop in backwards_segments(bp)
        ],
        "truncated": {
            path.value: [{"pair_id": bp.pair_id, **bp.aborted} for bp in pairs if bp.aborted is not None]
            for path, pairs in paths.items()
        },
    }
    written.append(write_json(directory / "boost_summary.json", summary))
    logger.info("boost: theta=%.3g, reintegrated discrepancy %.3e", b.theta, summary["discrepancy"][BoostPath.REINTEGRATED.value])
    return written


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    p = subparsers.add_parser("boost", parents=parents, help="Trajectories in a boosted frame")
    p.add_argument("--no-equal-time", action="store_true", help="Skip the equal-t' construction")
    p.set_defaults(handler=handle)


def handle(run: RunConfig, args: argparse.Namespace) -> int:
    cmd_boost(run, args.out, equal_time=not args.no_equal_time)
    return 0
