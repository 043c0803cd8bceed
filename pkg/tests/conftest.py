"""
tests/conftest.py
Shared fixtures: packet configurations, a reduced run configuration and
integrator options sized for the test suite.
"""
import numpy as np
import pytest

from bohmsim.models.packet import Direction, Packet, TwoPhotonConfig
from bohmsim.schemas.base import IntegratorOptions, RunConfig


@pytest.fixture
def cfg20():
    return TwoPhotonConfig.symmetric(20.0, 1.0)


@pytest.fixture
def cfg_unequal():
    return TwoPhotonConfig(
        right=Packet(16.0, 0.8, Direction.RIGHT),
        left=Packet(25.0, 1.25, Direction.LEFT),
    )


@pytest.fixture
def fast_opts():
    return IntegratorOptions(tol=1e-8, rtol=1e-8)


@pytest.fixture
def small_run(tmp_path):
    """Default physics on a coarse grid with small ensembles."""
    return RunConfig.model_validate({
        "grid": {
            "t": {"start": -1.0, "stop": 1.0, "num": 3},
            "x1": {"start": -3.0, "stop": 3.0, "num": 13},
            "x2": {"start": -3.0, "stop": 3.0, "num": 13},
        },
        "ensemble": {"n": 16, "seed": 7},
        "snapshot_times": [-1.0, 0.0],
        "verify": {
            "bundle_pairs": 4,
            "backwards_pairs": 24,
            "transport_pairs": 1000,
            "transport_bins": 10,
            "random_points": 6,
            "metric_samples": 2000,
        },
        "out_dir": str(tmp_path / "out"),
    })


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
