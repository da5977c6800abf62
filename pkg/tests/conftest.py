import numpy as np
import pytest

from frisec.channel import (
    FadingParams,
    PathLossModel,
    SystemGeometry,
    dbm_to_watts,
    realize_channels,
)
from frisec.numerics import RngStream

BENCH_POSITIONS = dict(
    ap_position=(0.0, 0.0, 10.0),
    bob_position=(50.0, 0.0, 1.5),
    eve_position=(55.0, 5.0, 1.5),
    fris_center=(45.0, 10.0, 5.0),
)


@pytest.fixture
def bench_geometry():
    return SystemGeometry(num_locations=100, **BENCH_POSITIONS)


@pytest.fixture
def pathloss():
    return PathLossModel()


@pytest.fixture
def fading():
    return FadingParams()


@pytest.fixture
def power_budget():
    return dbm_to_watts(20.0)


@pytest.fixture
def noise_power(fading):
    return fading.noise_power


def small_instance(seed: int, n: int = 6, m: int = 2, stream: int = 0):
    """A tiny channel realization handy for exhaustive oracles."""
    geom = SystemGeometry(num_locations=n, **BENCH_POSITIONS)
    channels = realize_channels(
        geom, PathLossModel(), FadingParams(), m, RngStream(seed).child(stream))
    return channels


def random_unit_complex(gen: np.random.Generator, m: int) -> np.ndarray:
    v = gen.standard_normal(m) + 1j * gen.standard_normal(m)
    return v / np.linalg.norm(v)
