"""Effective channels, SNRs, the secrecy rate, and the objective ratio.

The selection/phase state of the surface is a diagonal response
Phi = diag(s_n * exp(j * theta_n)) with theta_n drawn from the 2^B-point
uniform phase grid; phases are stored as integer indices so the discrete
constraint is structural, never a float comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from frisec.channel import ChannelSet


def _frozen_array(obj, name: str, value: np.ndarray) -> None:
    value = value.copy()
    value.setflags(write=False)
    object.__setattr__(obj, name, value)


@dataclass(frozen=True, eq=False)
class FrisConfig:
    """Element selection and discrete phase indices for the surface."""

    selection: np.ndarray  # bool, shape (N,)
    phase_index: np.ndarray  # int, shape (N,), each in [0, 2^bits)
    bits: int
    budget: int

    def __post_init__(self):
        sel = np.asarray(self.selection, dtype=bool)
        pidx = np.asarray(self.phase_index, dtype=np.int64)
        if sel.ndim != 1 or pidx.shape != sel.shape:
            raise ValueError("selection and phase_index must be equal-length vectors")
        if self.bits < 1:
            raise ValueError("bits must be >= 1")
        if np.any(pidx < 0) or np.any(pidx >= 2**self.bits):
            raise ValueError("phase indices must lie in [0, 2^bits)")
        if int(sel.sum()) != self.budget:
            raise ValueError("selection count must equal the budget")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        _frozen_array(self, "selection", sel)
        _frozen_array(self, "phase_index", pidx)

    @classmethod
    def from_indices(cls, indices, phase_indices, n: int, bits: int) -> "FrisConfig":
        indices = np.asarray(indices, dtype=np.int64)
        sel = np.zeros(n, dtype=bool)
        sel[indices] = True
        pidx = np.zeros(n, dtype=np.int64)
        pidx[indices] = np.asarray(phase_indices, dtype=np.int64)
        return cls(selection=sel, phase_index=pidx, bits=bits, budget=int(indices.size))

    @property
    def num_locations(self) -> int:
        return self.selection.size

    @property
    def selected_indices(self) -> np.ndarray:
        return np.flatnonzero(self.selection)

    @property
    def phases(self) -> np.ndarray:
        return 2.0 * np.pi * self.phase_index / (2**self.bits)

    def response_diagonal(self) -> np.ndarray:
        """Diagonal of Phi: s_n * exp(j * theta_n)."""
        return self.selection * np.exp(1j * self.phases)


@dataclass(frozen=True, eq=False)
class Beamformer:
    """Transmit weight vector with its power budget ||w||^2 <= power_budget."""

    weights: np.ndarray  # complex, shape (M,)
    power_budget: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.complex128)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a nonempty vector")
        if self.power_budget <= 0:
            raise ValueError("power budget must be positive")
        if np.vdot(w, w).real > self.power_budget * (1.0 + 1e-9):
            raise ValueError("beamformer exceeds its power budget")
        _frozen_array(self, "weights", w)


def effective_channel(
    direct: np.ndarray, reflect: np.ndarray, g: np.ndarray, config: FrisConfig
) -> np.ndarray:
    """Compose h with h^H = direct^H + reflect^H Phi g; only selected elements count."""
    direct = np.asarray(direct)
    reflect = np.asarray(reflect)
    g = np.asarray(g)
    if g.ndim != 2 or direct.shape != (g.shape[1],) or reflect.shape != (g.shape[0],):
        raise ValueError("channel dimensions are inconsistent")
    if config.num_locations != g.shape[0]:
        raise ValueError("config length does not match the number of locations")
    phi_diag = config.response_diagonal()
    return direct + g.conj().T @ (np.conj(phi_diag) * reflect)


def snr(h_eff: np.ndarray, beam: Beamformer, noise_power: float) -> float:
    """|h_eff^H w|^2 / noise_power."""
    if noise_power <= 0:
        raise ValueError("noise power must be positive")
    return float(np.abs(np.vdot(h_eff, beam.weights)) ** 2 / noise_power)


def secrecy_rate(gamma_b: float, gamma_e: float) -> float:
    """Clamped rate difference max(0, log2(1+gamma_b) - log2(1+gamma_e))."""
    if gamma_b < 0 or gamma_e < 0:
        raise ValueError("SNRs must be nonnegative")
    return max(0.0, np.log2(1.0 + gamma_b) - np.log2(1.0 + gamma_e))


def rate_from_ratio(ratio: float) -> float:
    """Secrecy rate implied by the objective ratio (clamp applied at reporting)."""
    return max(0.0, float(np.log2(ratio)))


def objective_ratio(
    channels: ChannelSet, config: FrisConfig, beam: Beamformer, noise_power: float
) -> float:
    """(1 + gamma_B) / (1 + gamma_E) for the given surface config and beamformer."""
    h_b = effective_channel(channels.h_db, channels.h_rb, channels.g, config)
    h_e = effective_channel(channels.h_de, channels.h_re, channels.g, config)
    gamma_b = snr(h_b, beam, noise_power)
    gamma_e = snr(h_e, beam, noise_power)
    return (1.0 + gamma_b) / (1.0 + gamma_e)


@dataclass(frozen=True, eq=False)
class CascadeGains:
    """Per-element cascade terms for a fixed beamformer.

    With a = direct^H w and t_n = conj(reflect_n) * (g w)_n, the received
    amplitude of any config is a + sum over selected n of exp(j theta_n) t_n.
    Reduces each objective evaluation to O(budget) work, which is what makes
    the sampling loops cheap.
    """

    direct_b: complex
    direct_e: complex
    element_b: np.ndarray  # shape (N,)
    element_e: np.ndarray  # shape (N,)


def cascade_gains(channels: ChannelSet, beam: Beamformer) -> CascadeGains:
    gw = channels.g @ beam.weights
    return CascadeGains(
        direct_b=complex(np.vdot(channels.h_db, beam.weights)),
        direct_e=complex(np.vdot(channels.h_de, beam.weights)),
        element_b=np.conj(channels.h_rb) * gw,
        element_e=np.conj(channels.h_re) * gw,
    )


def phase_table(bits: int) -> np.ndarray:
    """exp(j * 2 pi k / 2^bits) for k = 0 .. 2^bits - 1."""
    k = np.arange(2**bits)
    return np.exp(2j * np.pi * k / (2**bits))


def cascade_ratios(
    gains: CascadeGains,
    selected: np.ndarray,
    phase_indices: np.ndarray,
    bits: int,
    noise_power: float,
) -> np.ndarray:
    """Objective ratios for a batch of configs given as index arrays.

    ``selected`` and ``phase_indices`` have shape (K, budget). Equals
    objective_ratio on each row; the equivalence is pinned down in tests.
    """
    table = phase_table(bits)
    factors = table[phase_indices]
    recv_b = gains.direct_b + (factors * gains.element_b[selected]).sum(axis=1)
    recv_e = gains.direct_e + (factors * gains.element_e[selected]).sum(axis=1)
    num = noise_power + np.abs(recv_b) ** 2
    den = noise_power + np.abs(recv_e) ** 2
    return num / den


def config_cascade_ratio(
    gains: CascadeGains, config: FrisConfig, noise_power: float
) -> float:
    """Cascade-path objective ratio of a single config."""
    idx = config.selected_indices
    ratios = cascade_ratios(
        gains, idx[None, :], config.phase_index[idx][None, :], config.bits, noise_power
    )
    return float(ratios[0])
