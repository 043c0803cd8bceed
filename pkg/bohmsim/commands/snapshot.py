"""
bohmsim/commands/snapshot.py
`snapshot` subcommand: ensemble positions on timeslices.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Sequence

from bohmsim.commands.common import output_dir
from bohmsim.commands.trajectories import build_ensemble
from bohmsim.engine.trajectories import snapshot
from bohmsim.errors import OutOfSpan
from bohmsim.schemas.base import RunConfig
from bohmsim.tools.export import write_snapshot_csv

logger = logging.getLogger(__name__)


def cmd_snapshot(run: RunConfig, times: Sequence[float] | None = None, out: str | None = None) -> list[Path]:
    """
    Raises
    ------
    OutOfSpan : a requested time lies outside [t0, t1].
    """
    times = list(times) if times else list(run.snapshot_times)
    for t in times:
        if not run.time.t0 <= t <= run.time.t1:
            raise OutOfSpan(f"snapshot time {t} outside [{run.time.t0}, {run.time.t1}]")
    t_end = max(times)
    ens = build_ensemble(run, t1=t_end if t_end > run.time.t0 else run.time.t1)
    directory = output_dir(run, out)
    return [write_snapshot_csv(directory / f"snapshot_t{t:+.3f}.csv", snapshot(ens, t)) for t in times]


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    p = subparsers.add_parser("snapshot", parents=parents, help="Ensemble positions at fixed times")
    p.set_defaults(handler=handle)


def handle(run: RunConfig, args: argparse.Namespace) -> int:
    cmd_snapshot(run, args.t, args.out)
    return 0
