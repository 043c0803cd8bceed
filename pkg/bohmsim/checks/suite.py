"""
bohmsim/checks/suite.py
Check registry and the suite runner: checks run in parallel, reports come
back in registry order.
"""
from __future__ import annotations

import logging
import time
from typing import Sequence

from bohmsim.checks.base import BaseCheck
from bohmsim.checks.dynamics import (
    BackwardsOnsetCheck,
    BoostPathsCheck,
    SymmetryCheck,
    TransportCheck,
    TransportFullCheck,
)
from bohmsim.checks.fields import (
    ContinuityCheck,
    CovarianceCheck,
    DensityIdentityCheck,
    EquivalenceCheck,
    FdCurrentsCheck,
    MetricCheck,
    ParaxialCheck,
    QuadratureCheck,
    RhoEqualityCheck,
    TTermsCheck,
)
from bohmsim.errors import ConfigError
from bohmsim.schemas.base import RunConfig, SuiteReport
from bohmsim.tools.parallel import parallel_map

logger = logging.getLogger(__name__)

REGISTRY: dict[str, type[BaseCheck]] = {
    cls.name: cls
    for cls in (
        EquivalenceCheck,
        QuadratureCheck,
        FdCurrentsCheck,
        ContinuityCheck,
        DensityIdentityCheck,
        RhoEqualityCheck,
        TTermsCheck,
        CovarianceCheck,
        MetricCheck,
        ParaxialCheck,
        SymmetryCheck,
        BoostPathsCheck,
        BackwardsOnsetCheck,
        TransportCheck,
        TransportFullCheck,
    )
}


def select_checks(names: Sequence[str] | None) -> list[type[BaseCheck]]:
    """
    Checks to run, in registry order. None selects every check not marked slow.

    Raises
    ------
    ConfigError : an unknown check name.
    """
    if names is None:
        return [cls for cls in REGISTRY.values() if not cls.slow]
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}; available: {list(REGISTRY)}")
    return [cls for name, cls in REGISTRY.items() if name in names]


def run_suite(run: RunConfig, names: Sequence[str] | None = None) -> SuiteReport:
    """Run the selected checks and merge their reports deterministically."""
    selected = select_checks(names if names is not None else run.verify.checks)
    start = time.monotonic()
    logger.info("run_suite: %d checks", len(selected))

    reports = parallel_map(lambda cls: cls(run).run(), selected)
    suite = SuiteReport(
        passed=all(r.passed for r in reports),
        checks=reports,
        config=run.model_dump(mode="json"),
    )
    logger.info(
        "run_suite: %s in %dms%s",
        "passed" if suite.passed else "FAILED",
        int((time.monotonic() - start) * 1000),
        "" if suite.passed else f" (failed: {', '.join(suite.failed)})",
    )
    return suite
