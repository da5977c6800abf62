"""Geometry, path loss, spatial correlation, and random channel realizations.

A surface of N candidate element locations sits on a 1D grid of aperture
W wavelengths (spacing d_s = W * lambda / (N - 1)). Element channels are
correlated through the classic isotropic-scattering model
R[i, j] = J0(2 * pi * |i - j| * d_s / lambda). The access-point link is
Rician with a rank-one line-of-sight steering component; user links are
Rayleigh. Direct AP-user links carry an extra blockage loss.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from frisec.numerics import RngStream, bessel_j0, psd_matrix_root, sample_complex_gaussian


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def _unit3(v) -> tuple:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError("axis must be a 3-vector")
    n = np.linalg.norm(arr)
    if n == 0:
        raise ValueError("axis must be nonzero")
    return tuple(arr / n)


@dataclass(frozen=True)
class SystemGeometry:
    """3D positions of the terminals plus the element-grid parameters."""

    ap_position: tuple
    bob_position: tuple
    eve_position: tuple
    fris_center: tuple
    num_locations: int = 100
    aperture_wavelengths: float = 12.375
    wavelength: float = 0.1
    fris_axis: tuple = (1.0, 0.0, 0.0)
    ap_axis: tuple = (1.0, 0.0, 0.0)

    def __post_init__(self):
        if self.num_locations < 2:
            raise ValueError("num_locations must be >= 2")
        if self.aperture_wavelengths <= 0 or self.wavelength <= 0:
            raise ValueError("aperture and wavelength must be positive")
        pts = [tuple(map(float, p)) for p in (
            self.ap_position, self.bob_position, self.eve_position, self.fris_center)]
        for i in range(4):
            for j in range(i + 1, 4):
                if pts[i] == pts[j]:
                    raise ValueError("terminal positions must be pairwise distinct")
        object.__setattr__(self, "ap_position", pts[0])
        object.__setattr__(self, "bob_position", pts[1])
        object.__setattr__(self, "eve_position", pts[2])
        object.__setattr__(self, "fris_center", pts[3])
        object.__setattr__(self, "fris_axis", _unit3(self.fris_axis))
        object.__setattr__(self, "ap_axis", _unit3(self.ap_axis))

    @property
    def spacing_over_wavelength(self) -> float:
        return self.aperture_wavelengths / (self.num_locations - 1)

    @property
    def spacing(self) -> float:
        return self.spacing_over_wavelength * self.wavelength


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance path loss: PL(d) = reference - 10 * exponent * log10(d) dB."""

    reference_loss_db: float = -30.0
    exponent_ap_fris: float = 2.2
    exponent_other: float = 2.8
    blockage_direct_db: float = 25.0

    def __post_init__(self):
        if self.exponent_ap_fris <= 0 or self.exponent_other <= 0:
            raise ValueError("path loss exponents must be positive")
        if not np.isfinite(self.reference_loss_db):
            raise ValueError("reference loss must be finite")


@dataclass(frozen=True)
class FadingParams:
    """Small-scale fading parameters: Rician factor (linear) and noise power (W)."""

    rician_k: float = 10.0 ** 0.5
    noise_power: float = 1e-11

    def __post_init__(self):
        if self.rician_k < 0:
            raise ValueError("rician_k must be >= 0")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """One realization of all five links plus the correlation root used."""

    h_db: np.ndarray  # direct AP -> Bob, shape (M,)
    h_de: np.ndarray  # direct AP -> Eve, shape (M,)
    g: np.ndarray  # AP -> surface, shape (N, M)
    h_rb: np.ndarray  # surface -> Bob, shape (N,)
    h_re: np.ndarray  # surface -> Eve, shape (N,)
    corr_root: np.ndarray  # shape (N, N)

    def __post_init__(self):
        n, m = self.g.shape
        if self.h_db.shape != (m,) or self.h_de.shape != (m,):
            raise ValueError("direct channel dimensions inconsistent with g")
        if self.h_rb.shape != (n,) or self.h_re.shape != (n,):
            raise ValueError("reflected channel dimensions inconsistent with g")
        if self.corr_root.shape != (n, n):
            raise ValueError("corr_root dimension inconsistent with g")

    @property
    def num_locations(self) -> int:
        return self.g.shape[0]

    @property
    def num_antennas(self) -> int:
        return self.g.shape[1]

    def fingerprint(self) -> str:
        """Content hash, used to assert paired designs see identical channels."""
        h = hashlib.sha256()
        for arr in (self.h_db, self.h_de, self.g, self.h_rb, self.h_re):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()


def build_correlation(n: int, d_s_over_lambda: float) -> np.ndarray:
    """Symmetric Toeplitz correlation matrix R[i,j] = J0(2 pi |i-j| d_s/lambda)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d_s_over_lambda <= 0:
        raise ValueError("d_s_over_lambda must be positive")
    lag_values = bessel_j0(2.0 * np.pi * np.arange(n) * d_s_over_lambda)
    lag_values = np.atleast_1d(lag_values)
    idx = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return lag_values[idx]


@lru_cache(maxsize=64)
def correlation_root(n: int, d_s_over_lambda: float):
    """Cached (R, R^{1/2}) pair; the root is the expensive part at large N."""
    r = build_correlation(n, d_s_over_lambda)
    root = psd_matrix_root(r)
    r.setflags(write=False)
    root.setflags(write=False)
    return r, root


def path_loss_linear(d: float, exponent: float, model: PathLossModel) -> float:
    """Linear power gain of the log-distance model at distance d meters."""
    if not np.isfinite(d) or d <= 0:
        raise ValueError("distance must be positive and finite")
    return db_to_linear(model.reference_loss_db - 10.0 * exponent * np.log10(d))


def los_component(geometry: SystemGeometry, m: int) -> np.ndarray:
    """Rank-one line-of-sight steering matrix, shape (N, M), unit-modulus entries.

    The surface side steers along the grid with spacing d_s; the AP side is a
    half-wavelength uniform linear array. Angles are measured between each
    array axis and the line connecting the array to the other terminal.
    """
    ap = np.asarray(geometry.ap_position)
    fc = np.asarray(geometry.fris_center)
    u_to_ap = (ap - fc) / np.linalg.norm(ap - fc)
    cos_phi = float(np.dot(geometry.fris_axis, u_to_ap))
    a_fris = np.exp(
        2j * np.pi * np.arange(geometry.num_locations) * geometry.spacing_over_wavelength * cos_phi
    )
    u_to_fris = -u_to_ap
    cos_psi = float(np.dot(geometry.ap_axis, u_to_fris))
    a_ap = np.exp(2j * np.pi * np.arange(m) * 0.5 * cos_psi)
    return np.outer(a_fris, a_ap.conj())


def link_gains(geometry: SystemGeometry, pathloss: PathLossModel) -> dict:
    """Large-scale linear gains per link, keyed by link name.

    Distances are terminal to surface center (far-field, one gain per link);
    the blockage penalty applies to the direct AP-user links only.
    """
    ap = np.asarray(geometry.ap_position)
    bob = np.asarray(geometry.bob_position)
    eve = np.asarray(geometry.eve_position)
    fc = np.asarray(geometry.fris_center)
    blockage = db_to_linear(-pathloss.blockage_direct_db)
    return {
        "direct_bob": path_loss_linear(
            np.linalg.norm(ap - bob), pathloss.exponent_other, pathloss) * blockage,
        "direct_eve": path_loss_linear(
            np.linalg.norm(ap - eve), pathloss.exponent_other, pathloss) * blockage,
        "ap_fris": path_loss_linear(
            np.linalg.norm(ap - fc), pathloss.exponent_ap_fris, pathloss),
        "fris_bob": path_loss_linear(
            np.linalg.norm(fc - bob), pathloss.exponent_other, pathloss),
        "fris_eve": path_loss_linear(
            np.linalg.norm(fc - eve), pathloss.exponent_other, pathloss),
    }


# Component order for the five sub-streams consumed per realization.
STREAM_DIRECT_BOB = 0
STREAM_DIRECT_EVE = 1
STREAM_AP_FRIS = 2
STREAM_REFLECT_BOB = 3
STREAM_REFLECT_EVE = 4


def realize_channels_from_streams(
    geometry: SystemGeometry,
    pathloss: PathLossModel,
    fading: FadingParams,
    m: int,
    streams,
) -> ChannelSet:
    """Realize all links from five explicit component streams.

    ``streams`` is a sequence of five RngStream objects in the order of the
    STREAM_* constants. Exposed separately so tests can exercise generator
    symmetries (e.g. swapping the Bob/Eve streams along with their positions).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if len(streams) != 5:
        raise ValueError("exactly five component streams are required")
    gains = link_gains(geometry, pathloss)
    n = geometry.num_locations
    _, root = correlation_root(n, geometry.spacing_over_wavelength)

    h_db = np.sqrt(gains["direct_bob"]) * sample_complex_gaussian(
        streams[STREAM_DIRECT_BOB], m)
    h_de = np.sqrt(gains["direct_eve"]) * sample_complex_gaussian(
        streams[STREAM_DIRECT_EVE], m)

    k = fading.rician_k
    g_los = los_component(geometry, m)
    g_nlos = sample_complex_gaussian(streams[STREAM_AP_FRIS], n * m).reshape(n, m)
    g = np.sqrt(gains["ap_fris"]) * (
        np.sqrt(k / (k + 1.0)) * g_los + np.sqrt(1.0 / (k + 1.0)) * (root @ g_nlos)
    )

    h_rb = np.sqrt(gains["fris_bob"]) * (
        root @ sample_complex_gaussian(streams[STREAM_REFLECT_BOB], n))
    h_re = np.sqrt(gains["fris_eve"]) * (
        root @ sample_complex_gaussian(streams[STREAM_REFLECT_EVE], n))

    return ChannelSet(h_db=h_db, h_de=h_de, g=g, h_rb=h_rb, h_re=h_re, corr_root=root)


def realize_channels(
    geometry: SystemGeometry,
    pathloss: PathLossModel,
    fading: FadingParams,
    m: int,
    rng: RngStream,
) -> ChannelSet:
    """Realize one ChannelSet; deterministic in (geometry, params, rng)."""
    streams = tuple(rng.child(i) for i in range(5))
    return realize_channels_from_streams(geometry, pathloss, fading, m, streams)
