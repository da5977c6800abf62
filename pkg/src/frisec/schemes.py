"""Alternating-optimization driver and the benchmark schemes.

Every scheme maps one channel realization to an achieved secrecy rate:

* ``ao_ceo``: alternate the closed-form beamformer with the cross-entropy
  element-selection/phase search until the objective settles.
* ``random_selection_phase_opt``: a uniformly random subset, then alternate
  beamforming with the deterministic phase polish.
* ``conventional_ris``: the same, but the subset is the fixed central block
  of the grid (a fixed-position surface of the same size).
* ``fris_random_phases``: random subset, random phases, optimal beamformer,
  single shot.
* ``no_surface``: direct links only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from frisec.beamform import solve_p2, solve_p2_subspace
from frisec.ceo import CeoParams, refine_phases, solve_p3
from frisec.channel import ChannelSet
from frisec.numerics import RngStream
from frisec.secrecy import (
    Beamformer,
    FrisConfig,
    effective_channel,
    objective_ratio,
    rate_from_ratio,
)

SCHEME_AO_CEO = "ao_ceo"
SCHEME_RANDOM_SELECTION = "random_selection_phase_opt"
SCHEME_CONVENTIONAL_RIS = "conventional_ris"
SCHEME_RANDOM_PHASES = "fris_random_phases"
SCHEME_NO_SURFACE = "no_surface"

ALL_SCHEMES = (
    SCHEME_AO_CEO,
    SCHEME_RANDOM_SELECTION,
    SCHEME_CONVENTIONAL_RIS,
    SCHEME_RANDOM_PHASES,
    SCHEME_NO_SURFACE,
)

# Fixed per-scheme child-stream keys so schemes draw from disjoint streams
# and a scheme's stream does not depend on which other schemes run.
SCHEME_STREAM_KEY = {
    SCHEME_AO_CEO: 10,
    SCHEME_RANDOM_SELECTION: 11,
    SCHEME_CONVENTIONAL_RIS: 12,
    SCHEME_RANDOM_PHASES: 13,
    SCHEME_NO_SURFACE: 14,
}


@dataclass(frozen=True)
class AoParams:
    """Alternating-optimization knobs wrapping the cross-entropy ones."""

    ceo: CeoParams
    max_iters: int = 20
    rel_tolerance: float = 1e-3

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.rel_tolerance <= 0:
            raise ValueError("rel_tolerance must be positive")


@dataclass(frozen=True, eq=False)
class SchemeResult:
    scheme: str
    secrecy_rate: float
    objective_ratio: float
    iterations_used: int
    config: FrisConfig
    beamformer: Beamformer
    trace: tuple  # objective ratio after each outer iteration


def _result(scheme, ratio, iterations, config, beam, trace) -> SchemeResult:
    return SchemeResult(
        scheme=scheme,
        secrecy_rate=rate_from_ratio(ratio),
        objective_ratio=float(ratio),
        iterations_used=iterations,
        config=config,
        beamformer=beam,
        trace=tuple(trace),
    )


def _effective_pair(channels: ChannelSet, config: FrisConfig):
    h_b = effective_channel(channels.h_db, channels.h_rb, channels.g, config)
    h_e = effective_channel(channels.h_de, channels.h_re, channels.g, config)
    return h_b, h_e


def _zero_config(n: int) -> FrisConfig:
    return FrisConfig.from_indices(np.empty(0, dtype=np.int64), [], n, 1)


def central_selection(n: int, n_hat: int) -> np.ndarray:
    """The n_hat contiguous central grid indices (0-based)."""
    if n_hat > n:
        raise ValueError("n_hat cannot exceed n")
    start = (n - n_hat) // 2
    return np.arange(start, start + n_hat)


def run_ao_ceo(
    channels: ChannelSet,
    power_budget: float,
    noise_power: float,
    n_hat: int,
    bits: int,
    params: AoParams,
) -> SchemeResult:
    """Alternate closed-form beamforming with cross-entropy configuration search.

    The incumbent configuration seeds the search's best-so-far each round,
    so the objective trace is non-decreasing up to float slack.
    """
    if params.ceo.rng is None:
        raise ValueError("AoParams.ceo.rng must be set")
    rng = params.ceo.rng
    n = channels.num_locations
    init_gen = rng.child(0).generator()
    sel = np.sort(init_gen.permutation(n)[:n_hat])
    config = FrisConfig.from_indices(sel, np.zeros(n_hat, dtype=np.int64), n, bits)

    trace: list[float] = []
    prev = None
    ratio = 1.0
    beam = None
    iterations = 0
    for i in range(1, params.max_iters + 1):
        iterations = i
        h_b, h_e = _effective_pair(channels, config)
        beam = solve_p2_subspace(h_b, h_e, power_budget, noise_power)
        ceo = replace(params.ceo, rng=rng.child(i))
        config, ratio = solve_p3(
            channels, beam, n_hat, bits, ceo, noise_power, incumbent=config)
        trace.append(ratio)
        if prev is not None and ratio - prev <= params.rel_tolerance * prev:
            break
        prev = ratio
    return _result(SCHEME_AO_CEO, ratio, iterations, config, beam, trace)


def _run_fixed_selection(
    scheme: str,
    channels: ChannelSet,
    power_budget: float,
    noise_power: float,
    selection_idx: np.ndarray,
    bits: int,
    params: AoParams,
) -> SchemeResult:
    """Alternate beamforming with the phase polish over a frozen selection."""
    n = channels.num_locations
    config = FrisConfig.from_indices(
        selection_idx, np.zeros(selection_idx.size, dtype=np.int64), n, bits)
    trace: list[float] = []
    prev = None
    ratio = 1.0
    beam = None
    iterations = 0
    for i in range(1, params.max_iters + 1):
        iterations = i
        h_b, h_e = _effective_pair(channels, config)
        beam = solve_p2_subspace(h_b, h_e, power_budget, noise_power)
        config = refine_phases(channels, beam, config, noise_power)
        ratio = objective_ratio(channels, config, beam, noise_power)
        trace.append(ratio)
        if prev is not None and ratio - prev <= params.rel_tolerance * prev:
            break
        prev = ratio
    return _result(scheme, ratio, iterations, config, beam, trace)


def run_conventional_ris(
    channels: ChannelSet,
    power_budget: float,
    noise_power: float,
    n_hat: int,
    bits: int,
    params: AoParams,
) -> SchemeResult:
    selection = central_selection(channels.num_locations, n_hat)
    return _run_fixed_selection(
        SCHEME_CONVENTIONAL_RIS, channels, power_budget, noise_power,
        selection, bits, params)


def run_random_selection_phase_opt(
    channels: ChannelSet,
    power_budget: float,
    noise_power: float,
    n_hat: int,
    bits: int,
    params: AoParams,
    rng: RngStream,
) -> SchemeResult:
    gen = rng.generator()
    selection = np.sort(gen.permutation(channels.num_locations)[:n_hat])
    return _run_fixed_selection(
        SCHEME_RANDOM_SELECTION, channels, power_budget, noise_power,
        selection, bits, params)


def run_fris_random_phases(
    channels: ChannelSet,
    power_budget: float,
    noise_power: float,
    n_hat: int,
    bits: int,
    rng: RngStream,
    optimized_selection: bool = False,
    params: AoParams | None = None,
) -> SchemeResult:
    """Random phases, one shot, beamformer optimized last.

    By default the selection is uniformly random as well. With
    ``optimized_selection`` the subset comes from a full ao_ceo run whose
    phases are then discarded and redrawn at random (the alternative reading
    of this baseline; kept behind the switch).
    """
    n = channels.num_locations
    if optimized_selection:
        if params is None:
            raise ValueError("optimized_selection requires AoParams")
        ao = replace(params, ceo=replace(params.ceo, rng=rng.child(1)))
        selection = run_ao_ceo(
            channels, power_budget, noise_power, n_hat, bits, ao
        ).config.selected_indices
        gen = rng.child(2).generator()
    else:
        gen = rng.generator()
        selection = np.sort(gen.permutation(n)[:n_hat])
    pidx = gen.integers(0, 2**bits, size=n_hat)
    config = FrisConfig.from_indices(selection, pidx, n, bits)
    h_b, h_e = _effective_pair(channels, config)
    beam = solve_p2_subspace(h_b, h_e, power_budget, noise_power)
    ratio = objective_ratio(channels, config, beam, noise_power)
    return _result(SCHEME_RANDOM_PHASES, ratio, 1, config, beam, [ratio])


def run_no_surface(
    channels: ChannelSet, power_budget: float, noise_power: float
) -> SchemeResult:
    config = _zero_config(channels.num_locations)
    beam = solve_p2_subspace(channels.h_db, channels.h_de, power_budget, noise_power)
    ratio = objective_ratio(channels, config, beam, noise_power)
    return _result(SCHEME_NO_SURFACE, ratio, 1, config, beam, [ratio])


def run_scheme(
    scheme: str,
    channels: ChannelSet,
    power_budget: float,
    noise_power: float,
    n_hat: int,
    bits: int,
    ao_params: AoParams,
    rng: RngStream,
) -> SchemeResult:
    """Dispatch a scheme by id, wiring its dedicated random stream."""
    if scheme == SCHEME_AO_CEO:
        ao = replace(ao_params, ceo=replace(ao_params.ceo, rng=rng))
        return run_ao_ceo(channels, power_budget, noise_power, n_hat, bits, ao)
    if scheme == SCHEME_CONVENTIONAL_RIS:
        return run_conventional_ris(
            channels, power_budget, noise_power, n_hat, bits, ao_params)
    if scheme == SCHEME_RANDOM_SELECTION:
        return run_random_selection_phase_opt(
            channels, power_budget, noise_power, n_hat, bits, ao_params, rng)
    if scheme == SCHEME_RANDOM_PHASES:
        return run_fris_random_phases(
            channels, power_budget, noise_power, n_hat, bits, rng)
    if scheme == SCHEME_NO_SURFACE:
        return run_no_surface(channels, power_budget, noise_power)
    raise ValueError(f"unknown scheme: {scheme}")


def exhaustive_joint_optimum(
    channels: ChannelSet,
    power_budget: float,
    noise_power: float,
    n_hat: int,
    bits: int,
):
    """Brute-force joint optimum for tiny instances.

    Enumerates every selection and phase assignment, pairs each with its
    closed-form optimal beamformer (full-size route), and returns
    (best_ratio, best_config, best_beamformer). Intended for oracle checks;
    the search space is C(n, n_hat) * 2^(bits * n_hat).
    """
    n = channels.num_locations
    best = (-np.inf, None, None)
    for sel in itertools.combinations(range(n), n_hat):
        sel_arr = np.asarray(sel, dtype=np.int64)
        for phases in itertools.product(range(2**bits), repeat=n_hat):
            config = FrisConfig.from_indices(sel_arr, phases, n, bits)
            h_b, h_e = _effective_pair(channels, config)
            beam = solve_p2(h_b, h_e, power_budget, noise_power)
            ratio = objective_ratio(channels, config, beam, noise_power)
            if ratio > best[0]:
                best = (ratio, config, beam)
    return best
