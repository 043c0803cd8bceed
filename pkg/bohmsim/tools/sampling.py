"""
bohmsim/tools/sampling.py
Rejection sampling of photon-pair positions from |ψ(t, x1, x2)|² and the
binned chi-square goodness-of-fit used for transport checks.
"""
from __future__ import annotations

import logging
import math

import numpy as np
from scipy import stats

from bohmsim.errors import InvalidParameter, RejectionStall
from bohmsim.physics.fields import VelocityField
from bohmsim.tools.quadrature import gauss_legendre_2d

logger = logging.getLogger(__name__)

STALL_RATE = 1e-6
# proposals drawn before the stall criterion is trusted
STALL_MIN_PROPOSALS = 1_000_000
# Gauss-Legendre nodes per bin axis; bins may span a few interference fringes
GL_ORDER = 16


def _normal_pdf(x: np.ndarray, mean: float, std: float) -> np.ndarray:
    return np.exp(-0.5 * ((x - mean) / std) ** 2) / (std * math.sqrt(2.0 * math.pi))


def sample_pairs(field: VelocityField, t0: float, n: int, seed: int | None) -> np.ndarray:
    """
    Draw n pairs from the normalised |ψ(t0, ·, ·)|², each ordered x1 < x2.

    Proposal: equal mixture of the two product Gaussians |ψR(x1)ψL(x2)|² and
    |ψR(x2)ψL(x1)|², whose sum bounds |ψ|²; acceptance is close to 1/2.

    Raises
    ------
    InvalidParameter : n < 1.
    RejectionStall   : acceptance rate below 1e-6.
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n!r}")
    rng = np.random.default_rng(seed)
    mR, sR = field.marginal(field.cfg.right, t0)
    mL, sL = field.marginal(field.cfg.left, t0)

    chunks: list[np.ndarray] = []
    accepted = proposed = 0
    while accepted < n:
        m = max(64, 2 * (n - accepted) + 16)
        swap = rng.random(m) < 0.5
        xa = rng.normal(mR, sR, m)
        xb = rng.normal(mL, sL, m)
        x1 = np.where(swap, xb, xa)
        x2 = np.where(swap, xa, xb)
        envelope = _normal_pdf(x1, mR, sR) * _normal_pdf(x2, mL, sL) + _normal_pdf(x2, mR, sR) * _normal_pdf(x1, mL, sL)
        target = field.density(t0, x1, x2)
        keep = rng.random(m) * envelope < target
        proposed += m
        accepted += int(keep.sum())
        chunks.append(np.column_stack([x1[keep], x2[keep]]))
        if proposed >= STALL_MIN_PROPOSALS and accepted / proposed < STALL_RATE:
            raise RejectionStall(f"acceptance {accepted}/{proposed} below {STALL_RATE:.0e}")

    logger.debug("sample_pairs: %d accepted of %d proposed (rate %.3f)", accepted, proposed, accepted / proposed)
    pairs = np.concatenate(chunks)[:n]
    return np.sort(pairs, axis=1)


def sample_conditional_x2(
    field: VelocityField, t0: float, x1_fixed: float, n: int, seed: int | None
) -> np.ndarray:
    """
    Draw n values of x2 from |ψ(t0, x1_fixed, x2)|²; returns (n, 2) with x1 = x1_fixed.

    Rows are not reordered: x2 may land on either side of x1_fixed.
    """
    if n < 1:
        raise InvalidParameter(f"n must be >= 1, got {n!r}")
    rng = np.random.default_rng(seed)
    mR, sR = field.marginal(field.cfg.right, t0)
    mL, sL = field.marginal(field.cfg.left, t0)
    wL = float(_normal_pdf(np.asarray(x1_fixed), mR, sR))   # photon 1 at x1, x2 carries the left-mover
    wR = float(_normal_pdf(np.asarray(x1_fixed), mL, sL))
    if wL + wR <= 0.0:
        raise RejectionStall(f"x1={x1_fixed} lies outside the support of both packets")
    p_left = wL / (wL + wR)

    chunks: list[np.ndarray] = []
    accepted = proposed = 0
    while accepted < n:
        m = max(64, 2 * (n - accepted) + 16)
        use_left = rng.random(m) < p_left
        x2 = np.where(use_left, rng.normal(mL, sL, m), rng.normal(mR, sR, m))
        envelope = wL * _normal_pdf(x2, mL, sL) + wR * _normal_pdf(x2, mR, sR)
        target = field.density(t0, np.full(m, x1_fixed), x2)
        keep = rng.random(m) * envelope < target
        proposed += m
        accepted += int(keep.sum())
        chunks.append(x2[keep])
        if proposed >= STALL_MIN_PROPOSALS and accepted / proposed < STALL_RATE:
            raise RejectionStall(f"acceptance {accepted}/{proposed} below {STALL_RATE:.0e}")

    x2 = np.concatenate(chunks)[:n]
    return np.column_stack([np.full(n, float(x1_fixed)), x2])


# ─── Goodness of fit ──────────────────────────────────────────────────────────

def chi_square_transport(
    field: VelocityField,
    t: float,
    points: np.ndarray,
    bins: int = 40,
    alpha: float = 0.01,
    min_expected: float = 5.0,
) -> dict[str, float]:
    """
    Chi-square test of ordered pairs (x1 < x2) against |ψ(t, ·, ·)|².

    Binning is over s = x1 + x2 and d = x2 - x1 >= 0, where the pair density is
    |ψ((s - d)/2, (s + d)/2)|². Expected bin masses come from Gauss-Legendre
    quadrature; bins expecting fewer than `min_expected` counts are pooled
    with the out-of-range mass. Rows with NaN (pairs truncated before t) are
    left out and counted in "dropped".
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    finite = np.all(np.isfinite(pts), axis=1)
    dropped = int(pts.shape[0] - np.count_nonzero(finite))
    pts = np.sort(pts[finite], axis=1)
    n = pts.shape[0]
    if n == 0:
        raise InvalidParameter("chi_square_transport: no finite positions")
    s_obs = pts[:, 0] + pts[:, 1]
    d_obs = pts[:, 1] - pts[:, 0]

    mR, sR = field.marginal(field.cfg.right, t)
    mL, sL = field.marginal(field.cfg.left, t)
    s_std = math.hypot(sR, sL)
    s_mid = mR + mL
    s_edges = np.linspace(s_mid - 5.0 * s_std, s_mid + 5.0 * s_std, bins + 1)
    d_edges = np.linspace(0.0, abs(mL - mR) + 5.0 * s_std, bins + 1)

    mass = gauss_legendre_2d(
        lambda s, d: field.density(t, 0.5 * (s - d), 0.5 * (s + d)), s_edges, d_edges, order=GL_ORDER
    )
    # pair density on x1 < x2 is 2|ψ|²/‖ψ‖²; ds dd = 2 dx1 dx2, so the (s, d) density is |ψ|²/‖ψ‖²
    mass = np.clip(mass, 0.0, None).ravel()
    overflow_mass = max(0.0, 1.0 - mass.sum())

    observed, _, _ = np.histogram2d(s_obs, d_obs, bins=[s_edges, d_edges])
    observed = observed.ravel()
    overflow_obs = n - observed.sum()

    expected = mass * n
    small = expected < min_expected
    f_obs = np.append(observed[~small], observed[small].sum() + overflow_obs)
    f_exp = np.append(expected[~small], expected[small].sum() + overflow_mass * n)
    if f_exp[-1] <= 0.0:
        f_obs, f_exp = f_obs[:-1], f_exp[:-1]
    f_exp = f_exp * (f_obs.sum() / f_exp.sum())

    result = stats.chisquare(f_obs, f_exp)
    return {
        "statistic": float(result.statistic),
        "pvalue": float(result.pvalue),
        "dof": float(len(f_obs) - 1),
        "n": float(n),
        "dropped": float(dropped),
        "passed": float(result.pvalue > alpha),
    }
