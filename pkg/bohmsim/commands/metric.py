"""
bohmsim/commands/metric.py
`metric` subcommand: shift-function maps vs(t, x) for both photons.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

import numpy as np

from bohmsim.commands.common import output_dir, require_optical
from bohmsim.models.event import MultiPoint
from bohmsim.physics.kg_dynamics import currents, node_threshold
from bohmsim.physics.lorentz import redshift_packets
from bohmsim.physics.metric import shift_from_current
from bohmsim.schemas.base import RunConfig
from bohmsim.tools.export import write_csv

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ("t", "x1", "x2", "vs1", "vs2")


def metric_rows(run: RunConfig) -> np.ndarray:
    """
    vs_i on run.metric_grid from photon i's current at equal times; NaN at
    nodes. With a boost the grid is in primed coordinates.
    """
    require_optical(run, "metric")
    cfg = run.two_photon()
    b = run.boost()
    if b is not None:
        cfg = redshift_packets(b, cfg)
    t, x1, x2 = run.metric_grid.mesh()
    thr = node_threshold(cfg)
    vs = [
        shift_from_current(c, node_eps=thr, strict=False).vs
        for c in currents(cfg, MultiPoint.of(t, x1, t, x2))
    ]
    return np.column_stack([np.ravel(np.broadcast_to(c, t.shape)) for c in (t, x1, x2, *vs)])


def cmd_metric(run: RunConfig, out: str | None = None) -> list[Path]:
    path = output_dir(run, out) / "metric_map.csv"
    return [write_csv(path, METRIC_COLUMNS, metric_rows(run))]


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    p = subparsers.add_parser("metric", parents=parents, help="Quantum-metric shift map as CSV")
    p.set_defaults(handler=handle)


def handle(run: RunConfig, args: argparse.Namespace) -> int:
    cmd_metric(run, args.out)
    return 0
