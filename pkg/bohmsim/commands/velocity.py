"""
bohmsim/commands/velocity.py
`velocity` subcommand: velocity and current grids from both routes.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

import numpy as np

from bohmsim.commands.common import output_dir, require_optical
from bohmsim.models.event import EqualTimePoint, MultiPoint
from bohmsim.physics import paraxial
from bohmsim.physics.kg_dynamics import currents, node_threshold, velocity_kg
from bohmsim.physics.lorentz import redshift_packets
from bohmsim.physics.weak_value import velocity_m
from bohmsim.schemas.base import RunConfig
from bohmsim.tools.export import write_csv

logger = logging.getLogger(__name__)

VELOCITY_COLUMNS = ("t", "x1", "x2", "v1_kg", "v2_kg", "v1_m", "v2_m", "rho1", "rho2", "j1", "j2")


def velocity_rows(run: RunConfig) -> np.ndarray:
    """
    One row per grid point. With a boost the grid is read in primed
    coordinates and the fields are those of the Doppler-shifted packets.
    Paraxial runs fill both velocity routes with the phase-gradient velocity,
    ρ_i with the paraxial energy density and j_i with kz|Ψ|²v_i.

    Raises
    ------
    ConfigError : a boost combined with the paraxial dispersion.
    """
    cfg = run.two_photon()
    b = run.boost()
    if b is not None:
        require_optical(run, "velocity")
        cfg = redshift_packets(b, cfg)
    t, x1, x2 = run.grid.mesh()
    pt = EqualTimePoint(t, x1, x2)

    if run.dispersion == "paraxial":
        v1, v2 = paraxial.velocity_paraxial(cfg, run.kz, pt, strict=False)
        dens = run.kz * np.abs(paraxial.psi_paraxial_pair(cfg, run.kz, pt)) ** 2
        rho1 = paraxial.rho_paraxial(cfg, run.kz, pt, 1)
        rho2 = paraxial.rho_paraxial(cfg, run.kz, pt, 2)
        cols = [v1, v2, v1, v2, rho1, rho2, dens * v1, dens * v2]
    else:
        mp = MultiPoint.of(t, x1, t, x2)
        c1, c2 = currents(cfg, mp)
        vk1, vk2 = velocity_kg(cfg, mp, strict=False)
        vm1, vm2 = velocity_m(cfg, pt, strict=False)
        cols = [vk1, vk2, vm1, vm2, c1.rho, c2.rho, c1.j, c2.j]
        nodes = np.count_nonzero(np.abs(c1.rho) < node_threshold(cfg))
        if nodes:
            logger.info("velocity grid: %d points at interference nodes (NaN velocities)", nodes)

    return np.column_stack([np.ravel(np.broadcast_to(c, t.shape)) for c in (t, x1, x2, *cols)])


def cmd_velocity(run: RunConfig, out: str | None = None) -> list[Path]:
    path = output_dir(run, out) / "velocity_grid.csv"
    return [write_csv(path, VELOCITY_COLUMNS, velocity_rows(run))]


def register(subparsers: argparse._SubParsersAction, parents: list[argparse.ArgumentParser]) -> None:
    p = subparsers.add_parser("velocity", parents=parents, help="Velocity and current grid as CSV")
    p.set_defaults(handler=handle)


def handle(run: RunConfig, args: argparse.Namespace) -> int:
    cmd_velocity(run, args.out)
    return 0
