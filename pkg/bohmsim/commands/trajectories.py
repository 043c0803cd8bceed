"""
bohmsim/commands/trajectories.py
`trajectories` subcommand: integrate the configured pairs and write the bundle.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

from bohmsim.commands.common import field_for, initial_conditions, output_dir
from bohmsim.engine.trajectories import integrate_ensemble
from bohmsim.models.trajectory import Ensemble
from bohmsim.schemas.base import RunConfig
from bohmsim.tools.export import write_trajectories_csv, write_trajectories_json

logger = logging.getLogger(__name__)


def build_ensemble(run: RunConfig, t1: float | None = None) -> Ensemble:
    field = field_for(run)
    ics = initial_conditions(run, field)
    seed = run.ensemble.seed if run.ensemble else None
    return integrate_ensemble(field, ics, run.time.t0, run.time.t1 if t1 is None else t1, run.integrator, seed=seed)


def cmd_trajectories(run: RunConfig, out: str | None = None) -> list[Path]:
    ens = build_ensemble(run)
    directory = output_dir(run, out)
    meta = {"config": run.model_dump(mode="json")}
    return [
        write_trajectories_csv(directory / "trajectories.csv", ens.pairs),
        write_trajectories_json(directory / "trajectories.json", ens, meta),
    ]


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    p = subparsers.add_parser("trajectories", parents=parents, help="Integrate a trajectory bundle")
    p.set_defaults(handler=handle)


def handle(run: RunConfig, args: argparse.Namespace) -> int:
    cmd_trajectories(run, args.out)
    return 0
