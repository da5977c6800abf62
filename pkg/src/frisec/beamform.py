"""Closed-form transmit beamforming for a fixed surface configuration.

For effective channels h_B and h_E, the optimal unit-norm direction
maximizes the generalized Rayleigh quotient of the pencil
(P * h_B h_B^H + sigma^2 I, P * h_E h_E^H + sigma^2 I) and the power
constraint is met with equality. Two routes are provided: the full MxM
eigensolve, and a default fast path that works inside span{h_B, h_E},
which is lossless because the pencil acts as the identity on the
orthogonal complement.
"""

from __future__ import annotations

import logging

import numpy as np

from frisec.numerics import max_generalized_rayleigh, phase_fix
from frisec.secrecy import Beamformer

logger = logging.getLogger(__name__)


def _perpendicular_unit(h: np.ndarray) -> np.ndarray:
    """Deterministic unit vector orthogonal to h (h nonzero, dimension >= 2)."""
    m = h.size
    q = h / np.linalg.norm(h)
    for k in range(m):
        e = np.zeros(m, dtype=np.complex128)
        e[k] = 1.0
        v = e - q * np.conj(q[k])
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return phase_fix(v / norm)
    raise AssertionError("unreachable: some basis vector is not parallel to h")


def _degenerate_beamformer(h_e: np.ndarray, power_budget: float) -> Beamformer:
    m = h_e.size
    logger.warning("zero legitimate channel; beamformer falls back to leakage minimizer")
    if np.linalg.norm(h_e) == 0.0 or m == 1:
        v = np.zeros(m, dtype=np.complex128)
        v[0] = 1.0
    else:
        v = _perpendicular_unit(h_e)
    return Beamformer(weights=np.sqrt(power_budget) * v, power_budget=power_budget)


def solve_p2(
    h_b: np.ndarray, h_e: np.ndarray, power_budget: float, noise_power: float
) -> Beamformer:
    """Optimal beamformer via the full-size generalized eigenproblem."""
    h_b = np.asarray(h_b, dtype=np.complex128)
    h_e = np.asarray(h_e, dtype=np.complex128)
    if h_b.shape != h_e.shape or h_b.ndim != 1:
        raise ValueError("h_b and h_e must be vectors of equal length")
    if power_budget <= 0 or noise_power <= 0:
        raise ValueError("power and noise must be positive")
    m = h_b.size
    if np.linalg.norm(h_b) == 0.0:
        return _degenerate_beamformer(h_e, power_budget)
    a = power_budget * np.outer(h_b, np.conj(h_b)) + noise_power * np.eye(m)
    b = power_budget * np.outer(h_e, np.conj(h_e)) + noise_power * np.eye(m)
    _, v = max_generalized_rayleigh(a, b)
    return Beamformer(weights=np.sqrt(power_budget) * v, power_budget=power_budget)


def solve_p2_subspace(
    h_b: np.ndarray, h_e: np.ndarray, power_budget: float, noise_power: float
) -> Beamformer:
    """Optimal beamformer restricted to span{h_b, h_e}; the fast default path.

    Falls through to solve_p2 when the channels are parallel, m < 2, or
    h_b vanishes. Matches solve_p2's achieved objective to within 1e-9
    relative on well-posed instances.
    """
    h_b = np.asarray(h_b, dtype=np.complex128)
    h_e = np.asarray(h_e, dtype=np.complex128)
    if h_b.shape != h_e.shape or h_b.ndim != 1:
        raise ValueError("h_b and h_e must be vectors of equal length")
    if power_budget <= 0 or noise_power <= 0:
        raise ValueError("power and noise must be positive")
    m = h_b.size
    norm_b = np.linalg.norm(h_b)
    if m < 2 or norm_b == 0.0:
        return solve_p2(h_b, h_e, power_budget, noise_power)
    q1 = h_b / norm_b
    resid = h_e - q1 * np.vdot(q1, h_e)
    norm_r = np.linalg.norm(resid)
    if norm_r <= 1e-12 * max(np.linalg.norm(h_e), 1e-300):
        return solve_p2(h_b, h_e, power_budget, noise_power)
    q2 = resid / norm_r
    basis = np.stack([q1, q2], axis=1)  # (m, 2)

    hb2 = basis.conj().T @ h_b
    he2 = basis.conj().T @ h_e
    a2 = power_budget * np.outer(hb2, np.conj(hb2)) + noise_power * np.eye(2)
    b2 = power_budget * np.outer(he2, np.conj(he2)) + noise_power * np.eye(2)
    _, y = max_generalized_rayleigh(a2, b2)
    v = basis @ y
    v = phase_fix(v / np.linalg.norm(v))
    return Beamformer(weights=np.sqrt(power_budget) * v, power_budget=power_budget)


def achieved_ratio(
    h_b: np.ndarray, h_e: np.ndarray, beam: Beamformer, noise_power: float
) -> float:
    """(sigma^2 + |h_b^H w|^2) / (sigma^2 + |h_e^H w|^2) for an explicit pair."""
    num = noise_power + np.abs(np.vdot(h_b, beam.weights)) ** 2
    den = noise_power + np.abs(np.vdot(h_e, beam.weights)) ** 2
    return float(num / den)
