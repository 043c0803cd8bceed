import math

import numpy as np
import pytest

from bohmsim.errors import InvalidParameter, NodeEncounter, NodeSingularity, NonConvergence, StepUnderflow
from bohmsim.tools.integrator import integrate, sample_grid
from bohmsim.tools.parallel import parallel_map
from bohmsim.tools.quadrature import gauss_legendre_2d, integrate_complex


# ─── quadrature ──────────────────────────────────────────────────────────────

def test_integrate_complex_gaussian_fourier():
    value = integrate_complex(lambda k: np.exp(-k * k / 2.0 + 1j * k), -12.0, 12.0, 1e-12)
    assert value == pytest.approx(math.sqrt(2.0 * math.pi) * math.exp(-0.5), abs=1e-11)


def test_integrate_complex_rejects_bad_tolerance():
    with pytest.raises(InvalidParameter):
        integrate_complex(lambda k: 1.0 + 0j, 0.0, 1.0, 0.0)


def test_integrate_complex_reports_stalls():
    # heavily oscillating integrand with too few subdivisions
    with pytest.raises(NonConvergence):
        integrate_complex(lambda k: np.exp(1j * 1e4 * k * k), 0.0, 10.0, 1e-14, limit=5)


def test_gauss_legendre_2d_integrates_polynomials_per_cell():
    s_edges = np.linspace(-1.0, 1.0, 5)
    d_edges = np.linspace(0.0, 2.0, 3)
    mass = gauss_legendre_2d(lambda s, d: s * s * d, s_edges, d_edges)
    assert mass.shape == (4, 2)
    assert mass.sum() == pytest.approx((2.0 / 3.0) * 2.0)
    assert mass[0, 1] == pytest.approx(((-0.5) ** 3 - (-1.0) ** 3) / 3.0 * (4.0 - 1.0) / 2.0)


# ─── integrator ──────────────────────────────────────────────────────────────

def test_sample_grid():
    assert np.allclose(sample_grid(0.0, 1.0, 0.25), [0.0, 0.25, 0.5, 0.75, 1.0])
    grid = sample_grid(0.0, 1.0, 0.3)
    assert grid[-1] == 1.0 and len(grid) == 5
    assert np.allclose(sample_grid(1.0, 0.0, 0.5), [1.0, 0.5, 0.0])
    with pytest.raises(InvalidParameter):
        sample_grid(0.0, 1.0, 0.0)


def test_integrate_exponential_decay():
    sol = integrate(lambda t, y: -y, 0.0, np.array([1.0, 2.0]), 1.0, atol=1e-12, rtol=1e-12, sample_dt=0.1)
    assert sol.y.shape == (2, 11)
    assert np.allclose(sol.y[:, -1], [math.exp(-1.0), 2.0 * math.exp(-1.0)], atol=1e-10)
    assert np.allclose(sol.dense(0.55), [math.exp(-0.55), 2.0 * math.exp(-0.55)], atol=1e-10)
    assert sol.stats.steps > 0 and sol.stats.node_retries == 0


def test_integrate_restarts_after_a_transient_node():
    calls = {"n": 0}

    def rhs(t, y):
        calls["n"] += 1
        if calls["n"] == 6:
            raise NodeSingularity("transient")
        return np.array([1.0])

    sol = integrate(rhs, 0.0, np.array([0.0]), 2.0, atol=1e-10, rtol=1e-10, sample_dt=0.5)
    assert sol.stats.node_retries == 1
    assert np.allclose(sol.y[0], sol.t, atol=1e-9)


def test_integrate_node_at_the_initial_state():
    def rhs(t, y):
        raise NodeSingularity("always")

    with pytest.raises(NodeEncounter):
        integrate(rhs, 0.0, np.array([0.0]), 1.0, atol=1e-9, rtol=1e-9, sample_dt=0.1)


def test_integrate_gives_up_on_a_persistent_node():
    def rhs(t, y):
        if t > 0.5:
            raise NodeSingularity("wall")
        return np.array([1.0])

    with pytest.raises((NodeEncounter, StepUnderflow)):
        integrate(rhs, 0.0, np.array([0.0]), 1.0, atol=1e-9, rtol=1e-9, sample_dt=0.1, max_retries=2)


def test_integrate_counts_rejected_steps():
    # the step grows across the flat stretch and must be cut back at the jump
    def rhs(t, y):
        return np.array([1.0 if t >= 0.5 else 0.0])

    sol = integrate(rhs, 0.0, np.array([0.0]), 1.0, atol=1e-10, rtol=1e-10, sample_dt=0.25)
    assert sol.stats.rejected >= 1
    assert sol.stats.nfev >= 12 * (sol.stats.steps + sol.stats.rejected)
    assert sol.y[0, -1] == pytest.approx(0.5, abs=1e-6)


def test_integrate_truncates_at_a_persistent_node():
    def rhs(t, y):
        if t > 0.5:
            raise NodeSingularity("wall")
        return np.array([1.0])

    sol = integrate(rhs, 0.0, np.array([0.0]), 1.0, atol=1e-9, rtol=1e-9, sample_dt=0.1, max_retries=2, truncate=True)
    assert not sol.complete
    assert sol.aborted.startswith(("NodeEncounter", "StepUnderflow"))
    assert 0.3 < sol.t_end <= 0.5
    assert sol.t[-1] == sol.t_end and np.all(np.diff(sol.t) > 0)
    assert np.allclose(sol.y[0], sol.t, atol=1e-9)
    assert sol.state_end[0] == pytest.approx(sol.t_end, abs=1e-9)


def test_integrate_truncated_at_the_initial_state():
    def rhs(t, y):
        raise NodeSingularity("always")

    sol = integrate(rhs, 0.0, np.array([2.0]), 1.0, atol=1e-9, rtol=1e-9, sample_dt=0.1, truncate=True)
    assert sol.dense is None and sol.t_end == 0.0
    assert sol.t.tolist() == [0.0] and sol.y.tolist() == [[2.0]]
    assert sol.aborted.startswith("NodeEncounter")


def test_integrate_rejects_empty_span():
    with pytest.raises(InvalidParameter):
        integrate(lambda t, y: y, 1.0, np.array([1.0]), 1.0, atol=1e-9, rtol=1e-9, sample_dt=0.1)


# ─── parallel ────────────────────────────────────────────────────────────────

def test_parallel_map_preserves_order():
    assert parallel_map(lambda x: x * x, range(50), max_workers=4) == [x * x for x in range(50)]


def test_parallel_map_reraises():
    def boom(x):
        if x == 3:
            raise ValueError("three")
        return x

    with pytest.raises(ValueError):
        parallel_map(boom, range(8), max_workers=4)
