import numpy as np
import pytest
from scipy.integrate import quad

from frisec.numerics import (
    NotPositiveSemidefiniteError,
    SingularMatrixError,
    hermitian_eig,
    max_generalized_rayleigh,
    psd_matrix_root,
)


def random_hermitian(gen, n):
    z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    return (z + z.conj().T) / 2


def random_hpd(gen, n, shift=0.0):
    z = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
    return z @ z.conj().T + shift * np.eye(n)


class TestHermitianEig:
    def test_residual_and_orthonormality(self):
        gen = np.random.default_rng(0)
        for n in (1, 2, 3, 5, 10, 40):
            a = random_hermitian(gen, n)
            w, v = hermitian_eig(a)
            fro = np.linalg.norm(a)
            assert np.linalg.norm(a - v @ np.diag(w) @ v.conj().T) <= 1e-10 * max(fro, 1e-30)
            assert np.linalg.norm(v.conj().T @ v - np.eye(n)) <= 1e-10
            assert np.all(np.diff(w) >= 0)

    def test_matches_lapack(self):
        gen = np.random.default_rng(1)
        a = random_hermitian(gen, 12)
        w, _ = hermitian_eig(a)
        np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-12 * np.linalg.norm(a))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitian_eig(np.zeros((2, 3)))


class TestPsdRoot:
    def test_identity_exact(self):
        assert np.array_equal(psd_matrix_root(np.eye(4)), np.eye(4))

    def test_diagonal_exact(self):
        root = psd_matrix_root(np.diag([4.0, 9.0]))
        assert np.array_equal(root, np.diag([2.0, 3.0]))

    def test_jakes_reconstruction_from_oracle_entries(self):
        # build the 3x3 correlation matrix from the integral oracle directly
        def j0_oracle(x):
            val, _ = quad(lambda t: np.cos(x * np.sin(t)), 0.0, np.pi, limit=200)
            return val / np.pi

        n, ds = 3, 0.125
        r = np.array([[j0_oracle(2 * np.pi * abs(i - j) * ds) for j in range(n)]
                      for i in range(n)])
        root = psd_matrix_root(r)
        err = np.linalg.norm(root @ root.conj().T - r) / np.linalg.norm(r)
        assert err <= 1e-8

    def test_clips_tiny_negative_eigenvalues(self):
        # rank-deficient PSD matrix perturbed just below zero
        v = np.array([1.0, 1.0, 1.0]) / np.sqrt(3)
        a = np.outer(v, v) - 1e-12 * np.eye(3)
        root = psd_matrix_root(a)
        assert np.linalg.norm(root @ root.conj().T - a) <= 1e-8 * np.linalg.norm(a) + 1e-10

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveSemidefiniteError):
            psd_matrix_root(np.diag([1.0, -0.5]))


class TestMaxGeneralizedRayleigh:
    def test_diagonal_reduces_to_ordinary(self):
        val, vec = max_generalized_rayleigh(np.diag([3.0, 1.0]), np.eye(2))
        assert abs(val - 3.0) <= 1e-12
        np.testing.assert_allclose(vec, [1.0, 0.0], atol=1e-12)

    def test_constant_quotient(self):
        val, vec = max_generalized_rayleigh(np.eye(3), np.eye(3))
        assert abs(val - 1.0) <= 1e-12
        first = vec[np.flatnonzero(np.abs(vec) > 1e-12)[0]]
        assert first.imag == 0.0 and first.real > 0

    def test_random_pair_sphere_certificate(self):
        gen = np.random.default_rng(2)
        a = random_hpd(gen, 4)
        b = random_hpd(gen, 4, shift=4.0)
        val, vec = max_generalized_rayleigh(a, b)
        # achieved quotient matches the reported value
        q = (vec.conj() @ a @ vec).real / (vec.conj() @ b @ vec).real
        assert abs(q - val) <= 1e-9 * abs(val)
        # no random direction beats it
        samples = gen.standard_normal((100_000, 4)) + 1j * gen.standard_normal((100_000, 4))
        num = np.einsum("ki,ij,kj->k", samples.conj(), a, samples).real
        den = np.einsum("ki,ij,kj->k", samples.conj(), b, samples).real
        assert np.max(num / den) <= val * (1 + 1e-9)

    def test_matches_lapack_generalized(self):
        import scipy.linalg

        gen = np.random.default_rng(3)
        for n in (2, 4, 8):
            a = random_hpd(gen, n)
            b = random_hpd(gen, n, shift=float(n))
            val, _ = max_generalized_rayleigh(a, b)
            ref = scipy.linalg.eigh(a, b, eigvals_only=True)[-1]
            assert abs(val - ref) <= 1e-9 * abs(ref)

    def test_scaling_behavior(self):
        gen = np.random.default_rng(4)
        a = random_hpd(gen, 3)
        b = random_hpd(gen, 3, shift=3.0)
        val, vec = max_generalized_rayleigh(a, b)
        val2, vec2 = max_generalized_rayleigh(2.5 * a, b)
        assert abs(val2 - 2.5 * val) <= 1e-9 * abs(val2)
        np.testing.assert_allclose(vec2, vec, atol=1e-9)
        val3, _ = max_generalized_rayleigh(2.5 * a, 2.5 * b)
        assert abs(val3 - val) <= 1e-9 * abs(val)

    def test_identity_b_equals_top_eigenvalue(self):
        gen = np.random.default_rng(5)
        a = random_hpd(gen, 5)
        val, _ = max_generalized_rayleigh(a, np.eye(5))
        w, _ = hermitian_eig(a)
        assert abs(val - w[-1]) <= 1e-10 * abs(w[-1])

    def test_singular_b_rejected(self):
        with pytest.raises(SingularMatrixError):
            max_generalized_rayleigh(np.eye(2), np.diag([1.0, 0.0]))

    def test_deterministic(self):
        gen = np.random.default_rng(6)
        a = random_hpd(gen, 4)
        b = random_hpd(gen, 4, shift=4.0)
        v1 = max_generalized_rayleigh(a, b)[1]
        v2 = max_generalized_rayleigh(a, b)[1]
        assert np.array_equal(v1, v2)
