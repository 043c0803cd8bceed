"""
bohmsim/schemas/base.py
Pydantic schemas: the versioned run configuration, integrator/grid/ensemble
options, verification tolerances and machine-readable reports.
"""
from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from bohmsim.errors import ConfigError
from bohmsim.models.current import Boost
from bohmsim.models.packet import Direction, Packet, TwoPhotonConfig

logger = logging.getLogger(__name__)


# ─── Physical setup ───────────────────────────────────────────────────────────

class PacketSpec(BaseModel):
    k0R: float = Field(20.0, gt=0)
    sigmaR: float = Field(1.0, gt=0)
    k0L: float = Field(20.0, gt=0)
    sigmaL: float = Field(1.0, gt=0)

    def to_config(self) -> TwoPhotonConfig:
        return TwoPhotonConfig(
            right=Packet(self.k0R, self.sigmaR, Direction.RIGHT),
            left=Packet(self.k0L, self.sigmaL, Direction.LEFT),
        )


class TimeWindow(BaseModel):
    t0: float = -2.0
    t1: float = 2.0

    @model_validator(mode="after")
    def _ordered(self) -> "TimeWindow":
        if not self.t1 > self.t0:
            raise ValueError(f"t1 must exceed t0 (got t0={self.t0}, t1={self.t1})")
        return self


# ─── Numerics ─────────────────────────────────────────────────────────────────

class IntegratorOptions(BaseModel):
    tol: float = Field(1e-9, gt=0)             # absolute local error on x
    rtol: float = Field(1e-9, gt=0)
    sample_dt: float = Field(0.01, gt=0)
    max_retries: int = Field(40, ge=0)         # node restarts before NodeEncounter
    min_step: float = Field(1e-12, gt=0)
    method: Literal["DOP853", "RK45"] = "DOP853"
    batch_size: int = Field(128, ge=1)         # pairs integrated as one vector system


class EnsembleSpec(BaseModel):
    n: int = Field(200, ge=1)
    seed: int = Field(0, ge=0)
    x1_fixed: float | None = None              # sample x2 conditionally on a fixed x1


class Axis(BaseModel):
    start: float
    stop: float
    num: int = Field(..., ge=1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


class GridSpec(BaseModel):
    t: Axis = Axis(start=-2.0, stop=2.0, num=5)
    x1: Axis = Axis(start=-4.0, stop=4.0, num=21)
    x2: Axis = Axis(start=-4.0, stop=4.0, num=21)

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(t, x1, x2) arrays of shape (nt, nx1, nx2)."""
        return np.meshgrid(self.t.values(), self.x1.values(), self.x2.values(), indexing="ij")


class Tolerances(BaseModel):
    """Every threshold of the verification suite."""

    equivalence: float = Field(1e-10, gt=0)         # |v_m - v_kg| / max(1, |v|)
    quadrature_rel: float = Field(1e-8, gt=0)       # closed form vs oracle, relative to peak modulus
    fd_currents: float = Field(1e-6, gt=0)          # closed form vs Richardson FD, absolute
    fd_h: float = Field(1e-3, gt=0)
    continuity_ratio_lo: float = 3.5
    continuity_ratio_hi: float = 4.5
    continuity_fraction: float = Field(0.95, gt=0, le=1)
    noise_factor: float = Field(10.0, gt=0)
    density_identity_scale: float = Field(0.5, gt=0)     # peak-normalised deviation < scale / q
    density_identity_integrated: float = Field(1e-3, gt=0)
    residual_match: float = Field(1e-10, gt=0)      # deviation vs exact sin-term, peak-normalised
    rho_equality: float = Field(1e-12, gt=0)
    t_terms_zero: float = Field(1e-10, gt=0)
    t_terms_rel: float = Field(1e-8, gt=0)
    covariance_rel: float = Field(1e-9, gt=0)
    metric: float = Field(1e-14, gt=0)
    paraxial_ratio: float = Field(1e-2, gt=0)
    paraxial_fd: float = Field(1e-6, gt=0)
    boost_paths: float = Field(1e-5, gt=0)
    symmetry: float = Field(1e-6, gt=0)
    chi2_alpha: float = Field(0.01, gt=0, lt=1)


class VerifySpec(BaseModel):
    checks: list[str] | None = None                 # None runs the whole suite
    q_ladder: list[float] = [10.0, 20.0, 40.0]
    density_q_ladder: list[float] = [20.0, 40.0, 80.0]
    boost_thetas: list[float] = [0.2, 0.4, 0.6]
    path_thetas: list[float] = [0.2, 0.4]
    backwards_theta: float = Field(0.6, gt=-1, lt=1)
    bundle_pairs: int = Field(24, ge=1)
    backwards_pairs: int = Field(48, ge=1)
    transport_pairs: int = Field(4000, ge=10)
    transport_bins: int = Field(20, ge=2)
    random_points: int = Field(20, ge=1)
    metric_samples: int = Field(10_000, ge=1)
    paraxial_kz_ratios: list[float] = [10.0, 100.0, 1000.0]


# ─── Run configuration ────────────────────────────────────────────────────────

class RunConfig(BaseModel):
    schema_version: Literal[1] = 1
    packets: PacketSpec = PacketSpec()
    dispersion: Literal["optical", "paraxial"] = "optical"
    kz: float | None = Field(None, gt=0)
    route: Literal["kg", "m"] = "kg"
    theta: float | None = None
    time: TimeWindow = TimeWindow()
    ics: list[tuple[float, float]] | None = None
    ensemble: EnsembleSpec | None = None
    integrator: IntegratorOptions = IntegratorOptions()
    grid: GridSpec = GridSpec()
    snapshot_times: list[float] = [-1.0, -0.5, 0.0]
    metric_grid: GridSpec = GridSpec(t=Axis(start=-2.0, stop=2.0, num=81), x1=Axis(start=-4.0, stop=4.0, num=161),
                                     x2=Axis(start=0.0, stop=0.0, num=1))
    tolerances: Tolerances = Tolerances()
    verify: VerifySpec = VerifySpec()
    out_dir: str | None = None

    @field_validator("theta")
    @classmethod
    def _subluminal(cls, v: float | None) -> float | None:
        if v is not None and not (math.isfinite(v) and abs(v) < 1.0):
            raise ValueError(f"boost velocity must satisfy |theta| < 1, got {v}")
        return v

    @field_validator("ics")
    @classmethod
    def _distinct(cls, v: list[tuple[float, float]] | None):
        if v is not None:
            for i, (a, b) in enumerate(v):
                if a == b:
                    raise ValueError(f"ics[{i}]: x1 and x2 must differ")
        return v

    @model_validator(mode="after")
    def _paraxial_needs_kz(self) -> "RunConfig":
        if self.dispersion == "paraxial" and self.kz is None:
            raise ValueError("dispersion 'paraxial' requires kz")
        return self

    # ── domain objects ──────────────────────────────────────────────────────

    def two_photon(self) -> TwoPhotonConfig:
        return self.packets.to_config()

    def boost(self) -> Boost | None:
        return None if self.theta is None else Boost(self.theta)

    # ── persistence ─────────────────────────────────────────────────────────

    @classmethod
    def parse_text(cls, text: str, source: str = "<config>") -> "RunConfig":
        """
        Parse JSON text into a RunConfig.

        Raises
        ------
        ConfigError : malformed JSON or schema violations, each message naming
                      the source and line.
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            lines = []
            for err in exc.errors():
                loc = tuple(err.get("loc", ()))
                line = _locate(text, loc)
                path = ".".join(str(p) for p in loc) or "<root>"
                lines.append(f"{source}:{line}: {path}: {err['msg']}")
            raise ConfigError("\n".join(lines)) from exc

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config: {exc}") from exc
        cfg = cls.parse_text(text, source=str(path))
        logger.debug("loaded run config from %s", path)
        return cfg

    def dump(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        return path


def _locate(text: str, loc: tuple[Any, ...]) -> int:
    """Best-effort line number of the JSON key addressed by a pydantic error location."""
    pos = 0
    for part in loc:
        if not isinstance(part, str):
            continue
        found = text.find(f'"{part}"', pos)
        if found < 0:
            break
        pos = found
    return text.count("\n", 0, pos) + 1


# ─── Reports ──────────────────────────────────────────────────────────────────

class CheckReport(BaseModel):
    name: str
    passed: bool
    metrics: dict[str, float] = {}
    worst: dict[str, float] | None = None
    details: dict[str, Any] = {}
    error: str | None = None
    duration_ms: int | None = None


class SuiteReport(BaseModel):
    schema_version: Literal[1] = 1
    passed: bool
    checks: list[CheckReport]
    config: dict[str, Any] = {}

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]
