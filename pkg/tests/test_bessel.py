import numpy as np
import pytest
from scipy.integrate import quad

from frisec.numerics import bessel_j0

# frozen from the integral oracle (1/pi) * int_0^pi cos(x sin t) dt
J0_PI = -0.3042421776440939


def j0_oracle(x: float) -> float:
    val, _ = quad(lambda t: np.cos(x * np.sin(t)), 0.0, np.pi, limit=200)
    return val / np.pi


def test_value_at_zero():
    assert bessel_j0(0.0) == 1.0


def test_value_at_pi_frozen():
    assert abs(bessel_j0(np.pi) - J0_PI) < 1e-10


def test_value_at_pi_oracle():
    assert abs(bessel_j0(np.pi) - j0_oracle(np.pi)) < 1e-10


def test_first_zero():
    assert abs(bessel_j0(2.404826)) <= 1e-5


def test_even_function():
    xs = np.array([0.3, 1.7, 5.0, 12.9, 400.0])
    assert np.array_equal(bessel_j0(xs), bessel_j0(-xs))


def test_integral_oracle_grid():
    xs = np.linspace(0.0, 50.0, 50)
    ours = bessel_j0(xs)
    oracle = np.array([j0_oracle(float(x)) for x in xs])
    assert np.max(np.abs(ours - oracle)) <= 1e-8


def test_wide_range_accuracy():
    # spot-check beyond the oracle grid, against the quadrature oracle
    for x in (100.0, 500.0, 1000.0):
        assert abs(bessel_j0(x) - j0_oracle(x)) <= 1e-10


def test_non_finite_rejected():
    for bad in (np.nan, np.inf, -np.inf):
        with pytest.raises(ValueError):
            bessel_j0(bad)


def test_array_shape_and_scalar_type():
    arr = bessel_j0(np.array([[0.0, 1.0], [2.0, 3.0]]))
    assert arr.shape == (2, 2)
    assert isinstance(bessel_j0(1.5), float)
