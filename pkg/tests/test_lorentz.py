import math

import numpy as np
import pytest

from bohmsim.errors import PoleAtOne
from bohmsim.models.current import Boost, CurrentDensity
from bohmsim.models.event import Event, MultiPoint
from bohmsim.physics.kg_dynamics import density_scale
from bohmsim.physics.lorentz import (
    add_velocity,
    boost_current,
    boost_event,
    compose,
    covariance_residual,
    inverse,
    redshift_packets,
)


def test_boost_event_round_trip_and_interval(rng):
    t, x = rng.normal(size=50), rng.normal(size=50)
    b = Boost(0.45)
    e = boost_event(b, Event(t, x))
    back = boost_event(inverse(b), e)
    assert np.allclose(back.t, t, atol=1e-14) and np.allclose(back.x, x, atol=1e-14)
    assert np.allclose(e.interval(), t * t - x * x, atol=1e-13)


def test_boost_event_maps_lightcone_coordinates():
    b = Boost(0.6)
    e = Event(0.7, -0.2)
    primed = boost_event(b, e)
    assert primed.u == pytest.approx(e.u / b.doppler_right)
    assert primed.v == pytest.approx(b.doppler_right * e.v)


def test_add_velocity():
    b = Boost(0.5)
    assert add_velocity(b, 1.0) == pytest.approx(1.0)
    assert add_velocity(b, -1.0) == pytest.approx(-1.0)
    assert add_velocity(b, 0.5) == 0.0
    assert np.allclose(add_velocity(b, np.array([0.0, 0.8])), [-0.5, 0.5])
    with pytest.raises(PoleAtOne):
        add_velocity(b, 2.0)
    with pytest.raises(PoleAtOne):
        add_velocity(b, np.array([0.1, 2.0]))


def test_compose_adds_rapidities():
    a, b = Boost(0.3), Boost(0.4)
    assert compose(a, b).rapidity == pytest.approx(a.rapidity + b.rapidity)
    assert compose(a, inverse(a)).theta == pytest.approx(0.0, abs=1e-16)
    v = 0.25
    assert add_velocity(compose(a, b), v) == pytest.approx(add_velocity(b, add_velocity(a, v)))


def test_boost_current_of_a_null_current():
    b = Boost(0.4)
    cd = boost_current(b, CurrentDensity(3.0, 3.0))
    assert cd.rho == pytest.approx(3.0 * b.doppler_right)
    assert cd.j == pytest.approx(cd.rho)
    # velocity transforms by relativistic addition
    cd = boost_current(b, CurrentDensity(2.0, 0.5))
    assert cd.j / cd.rho == pytest.approx(add_velocity(b, 0.25))


def test_redshift_of_the_default_packets(cfg20):
    shifted = redshift_packets(Boost(0.6), cfg20)
    assert shifted.right.center == pytest.approx(10.0)
    assert shifted.left.center == pytest.approx(40.0)
    assert shifted.right.width == pytest.approx(0.5)
    assert shifted.left.width == pytest.approx(2.0)
    back = redshift_packets(Boost(-0.6), shifted)
    assert back.right.center == pytest.approx(20.0) and back.left.center == pytest.approx(20.0)


def test_redshift_keeps_q(cfg_unequal):
    b = Boost(-0.3)
    shifted = redshift_packets(b, cfg_unequal)
    assert shifted.right.q == pytest.approx(cfg_unequal.right.q)
    assert shifted.left.q == pytest.approx(cfg_unequal.left.q)
    assert shifted.right.center > cfg_unequal.right.center
    assert shifted.left.center < cfg_unequal.left.center
    assert math.isclose(shifted.right.center * shifted.left.center, cfg_unequal.right.center * cfg_unequal.left.center)


@pytest.mark.parametrize("theta", [0.2, 0.4, 0.6, -0.5])
@pytest.mark.parametrize("lag", [0.0, -0.5])
def test_currents_are_covariant(cfg_unequal, theta, lag):
    t, x1, x2 = np.meshgrid([-1.0, 0.0, 1.0], np.linspace(-3.0, 3.0, 13), np.linspace(-3.0, 3.0, 13), indexing="ij")
    b = Boost(theta)
    res = covariance_residual(b, cfg_unequal, MultiPoint.of(t, x1, t + lag, x2))
    scale = density_scale(cfg_unequal) * b.gamma
    for value in res.values():
        assert np.max(np.abs(value)) / scale < 1e-9
