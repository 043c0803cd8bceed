"""
bohmsim/tools/export.py
CSV and JSON writers with fixed column order and reproducible float formatting.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from bohmsim.config import settings
from bohmsim.models.trajectory import Ensemble, TrajectoryPair

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ("pair_id", "t", "x1", "x2", "v1", "v2")
SNAPSHOT_COLUMNS = ("pair_id", "x1", "x2")


def write_csv(path: str | Path, columns: Sequence[str], rows: np.ndarray, int_columns: int = 0) -> Path:
    """
    Write a header and rows; the first `int_columns` columns are integers, the
    rest use settings.CSV_FLOAT_FORMAT.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.size == 0:
        rows = rows.reshape(0, len(columns))
    fmt = ["%d"] * int_columns + [settings.CSV_FLOAT_FORMAT] * (len(columns) - int_columns)
    np.savetxt(path, rows, fmt=fmt, delimiter=",", header=",".join(columns), comments="")
    logger.info("wrote %s (%d rows)", path, rows.shape[0])
    return path


def read_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


def trajectory_rows(pairs: Sequence[TrajectoryPair]) -> np.ndarray:
    blocks = [np.column_stack([np.full(len(p), p.pair_id), p.rows()]) for p in pairs]
    return np.concatenate(blocks) if blocks else np.empty((0, len(TRAJECTORY_COLUMNS)))


def write_trajectories_csv(path: str | Path, pairs: Sequence[TrajectoryPair]) -> Path:
    return write_csv(path, TRAJECTORY_COLUMNS, trajectory_rows(pairs), int_columns=1)


def write_snapshot_csv(path: str | Path, positions: np.ndarray) -> Path:
    """One row per pair; pairs with no position at this time (NaN) are left out."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    rows = np.column_stack([np.arange(positions.shape[0]), positions])
    rows = rows[np.all(np.isfinite(positions), axis=1)]
    return write_csv(path, SNAPSHOT_COLUMNS, rows, int_columns=1)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_json(path: str | Path, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=False), encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def write_trajectories_json(path: str | Path, ens: Ensemble, meta: dict[str, Any] | None = None) -> Path:
    """Trajectory bundle with a meta block (configuration, seed, integrator stats)."""
    payload = {
        "meta": {
            "seed": ens.seed,
            "t0": ens.t0,
            "n_pairs": len(ens),
            **(meta or {}),
            **ens.meta,
        },
        "pairs": [
            {
                "pair_id": p.pair_id,
                "stats": vars(p.stats),
                "aborted": p.aborted,
                "t": p.t,
                "x1": p.x1,
                "x2": p.x2,
                "v1": p.v1,
                "v2": p.v2,
            }
            for p in ens.pairs
        ],
    }
    return write_json(path, payload)
