import numpy as np
import pytest

from bohmsim.errors import NodeSingularity
from bohmsim.models.current import CurrentDensity, MetricSample
from bohmsim.physics.metric import coordinate_velocity, null_branches, shift_from_current


@pytest.mark.parametrize(
    "rho,j,vs,v",
    [
        (1.0, 1.0, 0.0, 1.0),
        (1.0, -1.0, 0.0, -1.0),
        (1.0, 1.5, 0.5, 1.5),
        (1.0, 0.5, -0.5, 0.5),
        (2.0, -3.0, -0.5, -1.5),
        (-2.0, 1.0, 0.5, -0.5),
        (1.0, 0.0, -1.0, 0.0),
        (-3.0, 0.0, -1.0, 0.0),
    ],
)
def test_shift_and_coordinate_velocity(rho, j, vs, v):
    ms = shift_from_current(CurrentDensity(rho, j))
    assert ms.vs == pytest.approx(vs)
    assert coordinate_velocity(ms) == pytest.approx(v)
    assert ms.line_element(1.0, coordinate_velocity(ms)) == pytest.approx(0.0, abs=1e-15)


def test_round_trip_on_random_currents(rng):
    n = 10_000
    rho = rng.choice([-1.0, 1.0], n) * 10.0 ** rng.uniform(-6.0, 1.0, n)
    j = rng.uniform(-10.0, 10.0, n)
    v = j / rho
    ms = shift_from_current(CurrentDensity(rho, j))
    assert np.max(np.abs(coordinate_velocity(ms) - v) / np.maximum(1.0, np.abs(v))) < 1e-14
    null = ms.line_element(1.0, coordinate_velocity(ms)) / np.maximum(1.0, v * v)
    assert np.max(np.abs(null)) < 1e-12


def test_null_branches():
    ms = MetricSample(vs=0.25)
    plus, minus = null_branches(ms)
    assert (plus, minus) == (1.25, -0.75)
    assert ms.line_element(1.0, plus) == pytest.approx(0.0, abs=1e-15)
    assert ms.line_element(1.0, minus) == pytest.approx(0.0, abs=1e-15)


def test_unknown_direction_takes_the_plus_branch():
    assert coordinate_velocity(MetricSample(vs=0.25)) == 1.25
    assert coordinate_velocity(MetricSample(vs=0.25), direction=-1.0) == -0.75


def test_node_handling():
    with pytest.raises(NodeSingularity):
        shift_from_current(CurrentDensity(0.0, 1.0))
    ms = shift_from_current(CurrentDensity(np.array([0.0, 1.0]), np.array([1.0, 2.0])), strict=False)
    assert np.isnan(ms.vs[0]) and ms.vs[1] == 1.0
    ms = shift_from_current(CurrentDensity(1e-3, 1.0), node_eps=1e-2, strict=False)
    assert np.isnan(ms.vs)


def test_zero_current_round_trip_on_arrays():
    ms = shift_from_current(CurrentDensity(np.array([1.0, -1.0, 2.0]), np.array([0.0, 0.0, 4.0])))
    assert ms.vs.tolist() == [-1.0, -1.0, 1.0]
    assert ms.direction.tolist() == [1.0, 1.0, 1.0]
    assert coordinate_velocity(ms).tolist() == [0.0, 0.0, 2.0]
