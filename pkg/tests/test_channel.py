import numpy as np
import pytest
from scipy.integrate import quad

from frisec.channel import (
    FadingParams,
    PathLossModel,
    SystemGeometry,
    build_correlation,
    dbm_to_watts,
    link_gains,
    los_component,
    path_loss_linear,
    realize_channels,
    realize_channels_from_streams,
)
from frisec.numerics import RngStream
from tests.conftest import BENCH_POSITIONS

# frozen from -30 - 28*log10(50) = -77.57116... dB evaluated independently
PL_50_28 = 1.749379318309245e-08


def test_correlation_single_location():
    np.testing.assert_array_equal(build_correlation(1, 0.5), [[1.0]])


def test_correlation_two_locations_half_wavelength():
    def j0_oracle(x):
        val, _ = quad(lambda t: np.cos(x * np.sin(t)), 0.0, np.pi, limit=200)
        return val / np.pi

    r = build_correlation(2, 0.5)
    assert abs(r[0, 1] - j0_oracle(np.pi)) < 1e-10
    assert abs(r[0, 1] - (-0.3042421776)) < 1e-9


def test_correlation_toeplitz_symmetric_exact():
    r = build_correlation(8, 0.125)
    for i in range(7):
        for j in range(7):
            assert r[i, j] == r[i + 1, j + 1]
            assert r[i, j] == r[j, i]
    assert np.all(np.diag(r) == 1.0)


def test_correlation_numerically_psd():
    for n, ds in ((8, 0.125), (50, 0.125), (100, 0.5)):
        r = build_correlation(n, ds)
        w = np.linalg.eigvalsh(r)
        assert w.min() >= -1e-8


def test_path_loss_reference_distance():
    model = PathLossModel()
    assert abs(path_loss_linear(1.0, 2.8, model) - 1e-3) < 1e-18


def test_path_loss_frozen_values():
    model = PathLossModel()
    assert abs(path_loss_linear(50.0, 2.8, model) - PL_50_28) <= 1e-6 * PL_50_28
    assert abs(path_loss_linear(10.0, 2.2, model) - 10.0 ** -5.2) <= 1e-12 * 10.0 ** -5.2


def test_path_loss_rejects_nonpositive_distance():
    model = PathLossModel()
    for d in (0.0, -3.0):
        with pytest.raises(ValueError):
            path_loss_linear(d, 2.8, model)


def test_los_broadside_is_all_ones():
    geom = SystemGeometry(
        ap_position=(0.0, 10.0, 0.0), bob_position=(1.0, 0.0, 0.0),
        eve_position=(2.0, 0.0, 0.0), fris_center=(0.0, 0.0, 0.0),
        num_locations=5)
    g = los_component(geom, 3)
    np.testing.assert_allclose(g, np.ones((5, 3)), atol=1e-14)


def test_los_unit_modulus(bench_geometry):
    g = los_component(bench_geometry, 4)
    np.testing.assert_allclose(np.abs(g), 1.0, atol=1e-12)


def test_los_rank_one_power_iteration(bench_geometry):
    # second singular value via power iteration with deflation
    a = los_component(bench_geometry, 4)

    def top_singular(mat, iters=300):
        v = np.ones(mat.shape[1], dtype=complex) / np.sqrt(mat.shape[1])
        for _ in range(iters):
            v = mat.conj().T @ (mat @ v)
            v = v / np.linalg.norm(v)
        s = np.linalg.norm(mat @ v)
        u = mat @ v / s
        return s, u, v

    s1, u, v = top_singular(a)
    deflated = a - s1 * np.outer(u, v.conj())
    s2 = np.linalg.norm(deflated @ top_singular(deflated + 1e-30)[2]) if s1 > 0 else 0.0
    assert np.linalg.norm(deflated, 2) <= 1e-10 * s1
    assert s2 <= 1e-9 * s1


def test_geometry_validation():
    with pytest.raises(ValueError):
        SystemGeometry(ap_position=(0, 0, 0), bob_position=(0, 0, 0),
                       eve_position=(1, 0, 0), fris_center=(2, 0, 0))
    with pytest.raises(ValueError):
        SystemGeometry(num_locations=1, **BENCH_POSITIONS)


def test_realize_deterministic(bench_geometry, pathloss, fading):
    a = realize_channels(bench_geometry, pathloss, fading, 4, RngStream(3).child(1))
    b = realize_channels(bench_geometry, pathloss, fading, 4, RngStream(3).child(1))
    assert a.fingerprint() == b.fingerprint()


def test_realize_los_limit(bench_geometry, pathloss):
    # huge Rician factor: the scattered part vanishes
    fading = FadingParams(rician_k=1e9)
    cs = realize_channels(bench_geometry, pathloss, fading, 4, RngStream(5))
    gains = link_gains(bench_geometry, pathloss)
    g_los = np.sqrt(gains["ap_fris"]) * los_component(bench_geometry, 4)
    rel = np.linalg.norm(cs.g - g_los) / np.linalg.norm(cs.g)
    assert rel <= 1e-4


def test_direct_link_blockage_mean(bench_geometry, pathloss, fading):
    # mean direct-channel energy matches M * beta with the 25 dB blockage inside
    m, trials = 4, 2000
    total = 0.0
    for t in range(trials):
        cs = realize_channels(bench_geometry, pathloss, fading, m, RngStream(11).child(t))
        total += np.sum(np.abs(cs.h_db) ** 2)
    gains = link_gains(bench_geometry, pathloss)
    expected = m * gains["direct_bob"]
    assert abs(total / trials - expected) <= 0.1 * expected
    # and the blockage factor itself is 10^-2.5
    d = np.linalg.norm(np.array(bench_geometry.ap_position) - np.array(bench_geometry.bob_position))
    unblocked = path_loss_linear(d, pathloss.exponent_other, pathloss)
    assert abs(gains["direct_bob"] / unblocked - 10.0 ** -2.5) < 1e-12


def test_reflected_covariance_matches_correlation(pathloss, fading):
    geom = SystemGeometry(num_locations=16, **BENCH_POSITIONS)
    m, trials = 2, 5000
    acc = np.zeros((16, 16), dtype=complex)
    for t in range(trials):
        cs = realize_channels(geom, pathloss, fading, m, RngStream(13).child(t))
        acc += np.outer(cs.h_rb, cs.h_rb.conj())
    emp = acc / trials
    gains = link_gains(geom, pathloss)
    expected = gains["fris_bob"] * build_correlation(16, geom.spacing_over_wavelength)
    assert np.max(np.abs(emp - expected)) <= 0.05 * gains["fris_bob"]


def test_corr_root_reproduces_jakes(bench_geometry, pathloss, fading):
    cs = realize_channels(bench_geometry, pathloss, fading, 4, RngStream(1))
    r = build_correlation(bench_geometry.num_locations, bench_geometry.spacing_over_wavelength)
    err = np.linalg.norm(cs.corr_root @ cs.corr_root.conj().T - r) / np.linalg.norm(r)
    assert err <= 1e-8


def test_bob_eve_swap_symmetry(pathloss, fading):
    geom = SystemGeometry(num_locations=12, **BENCH_POSITIONS)
    swapped = SystemGeometry(
        ap_position=BENCH_POSITIONS["ap_position"],
        bob_position=BENCH_POSITIONS["eve_position"],
        eve_position=BENCH_POSITIONS["bob_position"],
        fris_center=BENCH_POSITIONS["fris_center"],
        num_locations=12)
    streams = tuple(RngStream(17).child(i) for i in range(5))
    # swap the bob/eve component streams along with the positions
    swapped_streams = (streams[1], streams[0], streams[2], streams[4], streams[3])
    a = realize_channels_from_streams(geom, pathloss, fading, 3, streams)
    b = realize_channels_from_streams(swapped, pathloss, fading, 3, swapped_streams)
    assert np.array_equal(a.h_db, b.h_de)
    assert np.array_equal(a.h_de, b.h_db)
    assert np.array_equal(a.h_rb, b.h_re)
    assert np.array_equal(a.h_re, b.h_rb)
    assert np.array_equal(a.g, b.g)


def test_correlation_depends_only_on_normalized_spacing():
    # equal d_s / lambda and N give bitwise identical R for different wavelengths
    g1 = SystemGeometry(num_locations=10, wavelength=0.1,
                        aperture_wavelengths=2.25, **BENCH_POSITIONS)
    g2 = SystemGeometry(num_locations=10, wavelength=0.2,
                        aperture_wavelengths=2.25, **BENCH_POSITIONS)
    assert g1.spacing_over_wavelength == g2.spacing_over_wavelength
    r1 = build_correlation(10, g1.spacing_over_wavelength)
    r2 = build_correlation(10, g2.spacing_over_wavelength)
    assert np.array_equal(r1, r2)


def test_dbm_conversion():
    assert abs(dbm_to_watts(-80.0) - 1e-11) < 1e-22
    assert abs(dbm_to_watts(20.0) - 0.1) < 1e-12
