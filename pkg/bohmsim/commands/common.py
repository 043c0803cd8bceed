"""
bohmsim/commands/common.py
Helpers shared by the subcommands: output directory, field and initial
conditions resolved from a RunConfig.
"""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from bohmsim.config import settings
from bohmsim.engine.trajectories import sample_conditional, sample_initial
from bohmsim.errors import ConfigError
from bohmsim.physics.fields import VelocityField, build_field
from bohmsim.schemas.base import RunConfig

logger = logging.getLogger(__name__)

# used when a config names neither explicit ICs nor an ensemble
DEFAULT_ICS = ((-2.0, 2.0),)


def output_dir(run: RunConfig, override: str | None = None) -> Path:
    path = Path(override or run.out_dir or settings.OUTPUT_DIR)
    path.mkdir(parents=True, exist_ok=True)
    return path


def field_for(run: RunConfig) -> VelocityField:
    return build_field(run.two_photon(), run.dispersion, run.kz, run.route)


def initial_conditions(run: RunConfig, field: VelocityField) -> np.ndarray:
    """Explicit ICs, else an ensemble draw (conditional when x1_fixed is set), else DEFAULT_ICS."""
    if run.ics:
        return np.asarray(run.ics, dtype=float).reshape(-1, 2)
    if run.ensemble is not None:
        ens = run.ensemble
        if ens.x1_fixed is not None:
            return sample_conditional(field, run.time.t0, ens.x1_fixed, ens.n, ens.seed)
        return sample_initial(field, run.time.t0, ens.n, ens.seed)
    logger.info("no ics or ensemble configured; using %s", DEFAULT_ICS)
    return np.asarray(DEFAULT_ICS, dtype=float)


def require_optical(run: RunConfig, command: str) -> None:
    if run.dispersion != "optical":
        raise ConfigError(f"{command}: boosts need the optical dispersion, got {run.dispersion!r}")
