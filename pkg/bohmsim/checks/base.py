"""
bohmsim/checks/base.py
Base check infrastructure: BaseCheck orchestrator and report helpers shared by
every verification check.
"""
from __future__ import annotations

import logging
import math
import time
from abc import ABC, abstractmethod
from typing import Any

import numpy as np

from bohmsim.models.packet import TwoPhotonConfig
from bohmsim.schemas.base import CheckReport, RunConfig

logger = logging.getLogger(__name__)


# ─── Helpers ──────────────────────────────────────────────────────────────────

def worst_location(errors: np.ndarray, **coords: np.ndarray) -> dict[str, float]:
    """Coordinates and value of the largest finite entry of `errors`."""
    errors = np.asarray(errors, dtype=float)
    masked = np.where(np.isfinite(errors), errors, -np.inf)
    if masked.size == 0 or not np.isfinite(masked.max()):
        return {}
    idx = np.unravel_index(int(np.argmax(masked)), masked.shape)
    out = {name: float(np.broadcast_to(c, errors.shape)[idx]) for name, c in coords.items()}
    out["value"] = float(errors[idx])
    return out


def finite_max(values: np.ndarray) -> float:
    """Largest finite entry (0 when nothing is finite)."""
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    return float(finite.max()) if finite.size else 0.0


def ladder_config(run: RunConfig, q: float) -> TwoPhotonConfig:
    """Equal packets of the run's right width with center q·σ."""
    return TwoPhotonConfig.symmetric(q * run.packets.sigmaR, run.packets.sigmaR)


def key(prefix: str, value: float) -> str:
    return f"{prefix}_{value:g}"


# ─── BaseCheck ────────────────────────────────────────────────────────────────

class BaseCheck(ABC):
    """
    Abstract base for every verification check.

    Subclasses implement evaluate(), which returns (passed, metrics, worst,
    details). The run() method handles:
      - timing the evaluation
      - catching all exceptions so the suite never crashes
      - logging the outcome
    """

    name: str = "check"
    # excluded from the default suite run when True
    slow: bool = False

    def __init__(self, run: RunConfig) -> None:
        self.run_cfg = run
        self.cfg = run.two_photon()
        self.tol = run.tolerances
        self.spec = run.verify

    @abstractmethod
    def evaluate(self) -> tuple[bool, dict[str, float], dict[str, float] | None, dict[str, Any]]:
        """Run the check and return (passed, metrics, worst, details)."""

    def run(self) -> CheckReport:
        """
        Execute the check and build its report.

        Returns
        -------
        CheckReport : passed/metrics/worst from evaluate(), or a failed report
                      carrying the exception message.
        """
        start_ms = time.monotonic()
        try:
            logger.info("%s: starting", self.name)
            passed, metrics, worst, details = self.evaluate()
            duration_ms = int((time.monotonic() - start_ms) * 1000)
            metrics = {k: (float(v) if math.isfinite(float(v)) else float("nan")) for k, v in metrics.items()}
            logger.info("%s: %s in %dms", self.name, "passed" if passed else "FAILED", duration_ms)
            if not passed:
                logger.warning("%s: metrics=%s worst=%s", self.name, metrics, worst)
            return CheckReport(
                name=self.name,
                passed=bool(passed),
                metrics=metrics,
                worst=worst or None,
                details=details,
                duration_ms=duration_ms,
            )
        except Exception as exc:
            duration_ms = int((time.monotonic() - start_ms) * 1000)
            logger.exception("%s: error after %dms: %s", self.name, duration_ms, exc)
            return CheckReport(
                name=self.name,
                passed=False,
                error=f"{type(exc).__name__}: {exc}",
                duration_ms=duration_ms,
            )
