import math

import numpy as np
import pytest

from bohmsim.errors import InvalidParameter
from bohmsim.models.event import Event
from bohmsim.models.packet import Direction, Packet
from bohmsim.physics.wavepacket import (
    Integrand,
    amplitude,
    amplitude_k,
    momentum_profile,
    norm_on_slice,
    prefactor,
    psi1,
    psi1_k,
    psi2,
    psi2_k,
    quad_oracle,
)

RIGHT = Packet(20.0, 1.0, Direction.RIGHT)
LEFT = Packet(20.0, 1.0, Direction.LEFT)

EVENTS = [(-2.0, -2.0), (-1.0, 0.3), (0.0, 0.0), (0.5, -0.4), (1.5, 2.1)]


def test_prefactor_is_peak_modulus():
    assert math.isclose(prefactor(RIGHT), (2.0 / math.pi) ** 0.25)
    assert math.isclose(abs(psi1(RIGHT, Event(1.0, 1.0))), prefactor(RIGHT))
    assert math.isclose(abs(psi2(LEFT, Event(1.0, -1.0))), prefactor(LEFT))


def test_right_mover_depends_on_u_only():
    a = psi1(RIGHT, Event(0.3, -0.2))
    b = psi1(RIGHT, Event(1.3, 0.8))
    assert a == pytest.approx(b, abs=1e-12)


def test_direction_is_enforced():
    e = Event(0.0, 0.0)
    for fn, p in ((psi1, LEFT), (psi1_k, LEFT), (psi2, RIGHT), (psi2_k, RIGHT)):
        with pytest.raises(InvalidParameter):
            fn(p, e)


def test_energy_weighted_amplitude_at_center():
    assert amplitude_k(RIGHT, 0.0) == pytest.approx(RIGHT.center * prefactor(RIGHT))
    w = np.linspace(-1.0, 1.0, 5)
    assert np.allclose(amplitude_k(RIGHT, w), (20.0 - 2j * w) * amplitude(RIGHT, w))


def test_momentum_profile_is_normalised():
    k = np.linspace(0.0, 40.0, 20001)
    assert np.trapezoid(momentum_profile(RIGHT, k) ** 2, k) == pytest.approx(1.0, abs=1e-10)
    assert momentum_profile(LEFT, -20.0, signed=True) == pytest.approx(LEFT.norm)


@pytest.mark.parametrize("t,x", EVENTS)
def test_closed_forms_match_quadrature(t, x):
    e = Event(t, x)
    cases = [
        (psi1, RIGHT, Integrand.PSI, prefactor(RIGHT)),
        (psi2, LEFT, Integrand.PSI, prefactor(LEFT)),
        (psi1_k, RIGHT, Integrand.PSI_K, prefactor(RIGHT) * RIGHT.center),
        (psi2_k, LEFT, Integrand.PSI_K, prefactor(LEFT) * LEFT.center),
    ]
    for closed, packet, selector, scale in cases:
        err = abs(complex(closed(packet, e)) - quad_oracle(selector, packet, e)) / scale
        assert err < 1e-8


def test_paraxial_quadrature_needs_kz():
    with pytest.raises(InvalidParameter):
        quad_oracle(Integrand.PARAXIAL, RIGHT, Event(0.0, 0.0))


@pytest.mark.parametrize("packet", [RIGHT, LEFT, Packet(5.0, 0.5, Direction.RIGHT)])
@pytest.mark.parametrize("t", [-2.0, 0.0, 1.7])
def test_norm_on_slice(packet, t):
    assert norm_on_slice(packet, t) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("t,x", EVENTS)
def test_left_mover_is_the_mirrored_right_mover(t, x):
    packet = Packet(16.0, 0.8, Direction.LEFT)
    mirror = packet.mirrored()
    assert psi2(packet, Event(t, x)) == pytest.approx(psi1(mirror, Event(t, -x)), abs=1e-14)
    assert psi2_k(packet, Event(t, x)) == pytest.approx(psi1_k(mirror, Event(t, -x)), abs=1e-12)
