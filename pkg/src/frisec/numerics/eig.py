"""Hermitian eigendecomposition and derived factorizations.

Everything here is built on a cyclic Jacobi sweep for complex Hermitian
matrices. The sizes in this package stay small (beamforming matrices are
MxM with M <= 8, correlation matrices a few hundred at most), where Jacobi
is accurate, simple, and deterministic: fixed pivot order, no pivoting
heuristics, no randomness.
"""

from __future__ import annotations

import numpy as np


class NotPositiveSemidefiniteError(ValueError):
    """Raised when a matrix root is requested for an indefinite matrix."""


class SingularMatrixError(ValueError):
    """Raised when a positive-definite operand is numerically singular."""


def _check_square_hermitian(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    scale = max(np.max(np.abs(a)), 1.0)
    if np.max(np.abs(a - a.conj().T)) > 1e-10 * scale:
        raise ValueError(f"{name} must be Hermitian")
    return a


def phase_fix(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a vector's global phase so its first nonzero entry is real > 0."""
    v = np.asarray(v, dtype=np.complex128)
    for i in range(v.size):
        m = abs(v[i])
        if m > tol:
            return v * (v[i].conjugate() / m)
    return v.copy()


def hermitian_eig(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (w, v) with eigenvalues w ascending and unitary v whose columns
    are the eigenvectors (each phase-fixed), so a = v @ diag(w) @ v^H.
    Convergence target: off-diagonal Frobenius norm <= tol * ||a||_F.
    """
    a = _check_square_hermitian(a, "a")
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real]), np.ones((1, 1), dtype=np.complex128)

    work = (a + a.conj().T) / 2.0
    vecs = np.eye(n, dtype=np.complex128)
    fro = np.linalg.norm(work)
    if fro == 0.0:
        return np.zeros(n), vecs
    target = tol * fro

    for _ in range(max_sweeps):
        off = np.linalg.norm(work - np.diag(np.diag(work)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = work[p, q]
                r = abs(alpha)
                if r == 0.0:
                    continue
                app = work[p, p].real
                aqq = work[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # unitary = diag(1, conj(alpha)/r) applied after the real rotation
                ph = alpha.conjugate() / r
                u00, u01 = c, s
                u10, u11 = -s * ph, c * ph

                col_p = work[:, p].copy()
                col_q = work[:, q].copy()
                work[:, p] = u00 * col_p + u10 * col_q
                work[:, q] = u01 * col_p + u11 * col_q
                row_p = work[p, :].copy()
                row_q = work[q, :].copy()
                work[p, :] = np.conj(u00) * row_p + np.conj(u10) * row_q
                work[q, :] = np.conj(u01) * row_p + np.conj(u11) * row_q
                work[p, q] = 0.0
                work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real

                vec_p = vecs[:, p].copy()
                vec_q = vecs[:, q].copy()
                vecs[:, p] = u00 * vec_p + u10 * vec_q
                vecs[:, q] = u01 * vec_p + u11 * vec_q
    else:
        raise RuntimeError("Jacobi eigensolver failed to converge")

    w = np.diag(work).real.copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    vecs = vecs[:, order]
    for j in range(n):
        vecs[:, j] = phase_fix(vecs[:, j])
    return w, vecs


def psd_matrix_root(a: np.ndarray, neg_tol: float = 1e-8) -> np.ndarray:
    """Hermitian square root L with L @ L^H == a (eigenvalues clipped at 0).

    Uses L = U sqrt(max(Lambda, 0)) U^H, which tolerates the numerically
    rank-deficient correlation matrices produced by dense element spacing
    where a triangular Cholesky factorization would break down.
    Raises NotPositiveSemidefiniteError when an eigenvalue falls below
    -neg_tol * ||a||_F.
    """
    a = _check_square_hermitian(a, "a")
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros_like(a)
    w, u = hermitian_eig(a)
    if w[0] < -neg_tol * fro:
        raise NotPositiveSemidefiniteError(
            f"matrix has eigenvalue {w[0]:.3e} below -{neg_tol:.1e} * ||a||_F"
        )
    root = (u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T
    return (root + root.conj().T) / 2.0


def max_generalized_rayleigh(a: np.ndarray, b: np.ndarray):
    """Maximize v^H a v / v^H b v over unit vectors v.

    a must be Hermitian PSD and b Hermitian positive definite. Solved by the
    standard reduction through b^{-1/2}: the maximizer is the top eigenvector
    of b^{-1/2} a b^{-1/2} mapped back and renormalized. Returns
    (value, vector) with the vector unit-norm and phase-fixed so repeated
    calls are bit-identical.
    """
    a = _check_square_hermitian(a, "a")
    b = _check_square_hermitian(b, "b")
    if a.shape != b.shape:
        raise ValueError("a and b must have matching shapes")
    fro_b = np.linalg.norm(b)
    wb, ub = hermitian_eig(b)
    if wb[0] <= 1e-12 * fro_b:
        raise SingularMatrixError("b is not positive definite")
    inv_root = (ub / np.sqrt(wb)) @ ub.conj().T
    c = inv_root @ a @ inv_root
    c = (c + c.conj().T) / 2.0
    wc, uc = hermitian_eig(c)
    value = float(wc[-1])
    v = inv_root @ uc[:, -1]
    v = v / np.linalg.norm(v)
    return value, phase_fix(v)
