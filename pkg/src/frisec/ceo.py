"""Cross-entropy search over element subsets and discrete phases.

The learned object is a probability mass function over the N candidate
locations. Each iteration draws K configurations (subsets without
replacement, phases uniform on the 2^B grid), scores them against the
secrecy objective for the current beamformer, refits the PMF to the elite
fraction, and smooths. The best configuration ever evaluated is retained.
A deterministic coordinate-ascent phase polish is provided separately; it
is also what the fixed-selection baseline schemes use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from frisec.channel import ChannelSet
from frisec.numerics import RngStream
from frisec.secrecy import (
    Beamformer,
    CascadeGains,
    FrisConfig,
    cascade_gains,
    cascade_ratios,
    config_cascade_ratio,
    phase_table,
)

_PMF_FLOOR = 1e-12


class InfeasiblePmfError(ValueError):
    """Raised when a PMF cannot support a selection of the requested size."""


@dataclass(frozen=True)
class CeoParams:
    """Cross-entropy knobs. sample_size defaults to 5N when left unset."""

    rng: RngStream | None = None
    sample_size: int | None = None
    elite_ratio: float = 0.1
    smoothing: float = 0.7
    max_iters: int = 30
    stagnation_patience: int = 5
    final_phase_polish: bool = True

    def __post_init__(self):
        if not (0.0 < self.elite_ratio <= 1.0):
            raise ValueError("elite_ratio must lie in (0, 1]")
        if not (0.0 < self.smoothing <= 1.0):
            raise ValueError("smoothing must lie in (0, 1]")
        if self.max_iters < 1 or self.stagnation_patience < 1:
            raise ValueError("max_iters and stagnation_patience must be >= 1")
        if self.sample_size is not None and self.sample_size < 2:
            raise ValueError("sample_size must be >= 2")

    def resolved_sample_size(self, n: int) -> int:
        return self.sample_size if self.sample_size is not None else 5 * n


def validate_pmf(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("pmf must be a nonempty vector")
    if np.any(p < 0):
        raise ValueError("pmf entries must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("pmf must sum to one")
    return p


def uniform_pmf(n: int, support: np.ndarray | None = None) -> np.ndarray:
    if support is None:
        return np.full(n, 1.0 / n)
    support = np.asarray(support, dtype=bool)
    if support.shape != (n,) or not support.any():
        raise ValueError("support must be a length-n mask with at least one entry")
    p = np.zeros(n)
    p[support] = 1.0 / support.sum()
    return p


def _sample_selection_batch(
    pmf: np.ndarray, n_hat: int, count: int, gen: np.random.Generator
) -> np.ndarray:
    """Draw `count` subsets of size n_hat, sequentially proportional to the
    remaining PMF mass (the mass of drawn elements is removed between draws)."""
    n = pmf.size
    if np.count_nonzero(pmf > 0) < n_hat:
        raise InfeasiblePmfError("pmf support is smaller than the selection size")
    weights = np.repeat(pmf[None, :], count, axis=0)
    out = np.empty((count, n_hat), dtype=np.int64)
    rows = np.arange(count)
    for j in range(n_hat):
        cum = np.cumsum(weights, axis=1)
        u = gen.random(count) * cum[:, -1]
        idx = (cum <= u[:, None]).sum(axis=1)
        np.minimum(idx, n - 1, out=idx)
        # float-rounding edge: if u landed past the last positive mass,
        # fall back to the first remaining positive-weight element
        landed_zero = weights[rows, idx] <= 0.0
        if np.any(landed_zero):
            idx[landed_zero] = np.argmax(weights[landed_zero] > 0.0, axis=1)
        out[:, j] = idx
        weights[rows, idx] = 0.0
    return out


def sample_config(
    pmf: np.ndarray, n_hat: int, bits: int, rng: RngStream
) -> FrisConfig:
    """Draw one configuration: selection from the PMF, phases uniform on the grid."""
    pmf = validate_pmf(pmf)
    gen = rng.generator()
    sel = _sample_selection_batch(pmf, n_hat, 1, gen)[0]
    pidx = gen.integers(0, 2**bits, size=n_hat)
    return FrisConfig.from_indices(np.sort(sel), pidx[np.argsort(sel)], pmf.size, bits)


def update_pmf(elites, n: int, n_hat: int) -> np.ndarray:
    """Refit the PMF to elite configurations: empirical appearance frequency."""
    if len(elites) == 0:
        raise ValueError("elite set must be nonempty")
    counts = np.zeros(n)
    for cfg in elites:
        idx = cfg.selected_indices
        if idx.size != n_hat:
            raise ValueError("every elite must select exactly n_hat elements")
        counts[idx] += 1.0
    return counts / (len(elites) * n_hat)


def _pmf_from_selected(selected: np.ndarray, n: int) -> np.ndarray:
    counts = np.bincount(selected.ravel(), minlength=n).astype(float)
    return counts / selected.size


def smooth_pmf(prev: np.ndarray, hat: np.ndarray, alpha: float) -> np.ndarray:
    prev = np.asarray(prev, dtype=float)
    hat = np.asarray(hat, dtype=float)
    if prev.shape != hat.shape:
        raise ValueError("pmf shapes must match")
    return (1.0 - alpha) * prev + alpha * hat


def _floor_and_normalize(p: np.ndarray, support: np.ndarray) -> np.ndarray:
    # keep in-support mass strictly positive so no element starves out
    p = p.copy()
    p[support] = np.maximum(p[support], _PMF_FLOOR)
    p[~support] = 0.0
    return p / p.sum()


def refine_phases(
    channels: ChannelSet, beam: Beamformer, config: FrisConfig, noise_power: float
) -> FrisConfig:
    """Deterministic coordinate ascent over the selected elements' phases."""
    gains = cascade_gains(channels, beam)
    return _refine_phases_cascade(gains, config, noise_power)


def _refine_phases_cascade(
    gains: CascadeGains, config: FrisConfig, noise_power: float
) -> FrisConfig:
    idx = config.selected_indices
    if idx.size == 0:
        return config
    table = phase_table(config.bits)
    pidx = config.phase_index[idx].copy()
    tb = gains.element_b[idx]
    te = gains.element_e[idx]

    for _ in range(20):
        recv_b = gains.direct_b + (table[pidx] * tb).sum()
        recv_e = gains.direct_e + (table[pidx] * te).sum()
        changed = False
        for j in range(idx.size):
            base_b = recv_b - table[pidx[j]] * tb[j]
            base_e = recv_e - table[pidx[j]] * te[j]
            ratios = (noise_power + np.abs(base_b + table * tb[j]) ** 2) / (
                noise_power + np.abs(base_e + table * te[j]) ** 2
            )
            k = int(np.argmax(ratios))  # first max, so ties go to the smallest index
            if k != pidx[j] and (
                ratios[k] > ratios[pidx[j]]
                or (ratios[k] == ratios[pidx[j]] and k < pidx[j])
            ):
                pidx[j] = k
                changed = True
            recv_b = base_b + table[pidx[j]] * tb[j]
            recv_e = base_e + table[pidx[j]] * te[j]
        if not changed:
            break
    return FrisConfig.from_indices(idx, pidx, config.num_locations, config.bits)


def solve_p3(
    channels: ChannelSet,
    beam: Beamformer,
    n_hat: int,
    bits: int,
    params: CeoParams,
    noise_power: float,
    selection_mask: np.ndarray | None = None,
    incumbent: FrisConfig | None = None,
):
    """Joint element selection and phase design for a fixed beamformer.

    Returns (config, ratio) for the best configuration ever evaluated.
    When `incumbent` is given it seeds the best-so-far, which is what makes
    the alternating-optimization objective non-decreasing. `selection_mask`
    restricts the PMF support to a fixed candidate set.

    Per-iteration randomness comes from params.rng.child(iteration), so the
    result is bit-reproducible no matter how evaluations are scheduled.
    """
    if params.rng is None:
        raise ValueError("CeoParams.rng must be set for solve_p3")
    n = channels.num_locations
    if n_hat > n or n_hat < 0:
        raise ValueError("n_hat must lie in [0, n]")
    gains = cascade_gains(channels, beam)

    if n_hat == 0:
        cfg = FrisConfig.from_indices(np.empty(0, dtype=np.int64), [], n, bits)
        return cfg, config_cascade_ratio(gains, cfg, noise_power)

    support = (
        np.ones(n, dtype=bool) if selection_mask is None
        else np.asarray(selection_mask, dtype=bool).copy()
    )
    if support.shape != (n,):
        raise ValueError("selection_mask must have length n")
    if support.sum() < n_hat:
        raise InfeasiblePmfError("selection_mask support is smaller than n_hat")
    pmf = uniform_pmf(n, support if selection_mask is not None else None)

    sample_size = params.resolved_sample_size(n)
    n_elite = math.ceil(params.elite_ratio * sample_size)

    best_sel: np.ndarray | None = None
    best_pidx: np.ndarray | None = None
    best_ratio = -np.inf
    if incumbent is not None:
        best_sel = incumbent.selected_indices
        best_pidx = incumbent.phase_index[best_sel]
        best_ratio = config_cascade_ratio(gains, incumbent, noise_power)

    prev_best = best_ratio
    stagnant = 0
    for it in range(params.max_iters):
        gen = params.rng.child(it).generator()
        sel = _sample_selection_batch(pmf, n_hat, sample_size, gen)
        pidx = gen.integers(0, 2**bits, size=(sample_size, n_hat))
        ratios = cascade_ratios(gains, sel, pidx, bits, noise_power)

        order = np.argsort(-ratios, kind="stable")
        top = order[0]
        if ratios[top] > best_ratio:
            best_ratio = float(ratios[top])
            best_sel = sel[top].copy()
            best_pidx = pidx[top].copy()

        elite = sel[order[:n_elite]]
        pmf = smooth_pmf(pmf, _pmf_from_selected(elite, n), params.smoothing)
        pmf = _floor_and_normalize(pmf, support)

        if np.isfinite(prev_best) and best_ratio <= prev_best * (1.0 + 1e-6):
            stagnant += 1
        else:
            stagnant = 0
        prev_best = best_ratio
        if stagnant >= params.stagnation_patience:
            break

    assert best_sel is not None and best_pidx is not None
    order_sel = np.argsort(best_sel)
    config = FrisConfig.from_indices(
        best_sel[order_sel], best_pidx[order_sel], n, bits)
    if params.final_phase_polish:
        config = _refine_phases_cascade(gains, config, noise_power)
        best_ratio = config_cascade_ratio(gains, config, noise_power)
    return config, float(best_ratio)
