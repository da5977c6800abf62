"""Shared numerical kernels: RNG streams, Bessel J0, Hermitian eigensolvers."""

from frisec.numerics.bessel import bessel_j0
from frisec.numerics.eig import (
    NotPositiveSemidefiniteError,
    SingularMatrixError,
    hermitian_eig,
    max_generalized_rayleigh,
    phase_fix,
    psd_matrix_root,
)
from frisec.numerics.rng import RngStream, sample_complex_gaussian

__all__ = [
    "RngStream",
    "sample_complex_gaussian",
    "bessel_j0",
    "hermitian_eig",
    "psd_matrix_root",
    "max_generalized_rayleigh",
    "phase_fix",
    "NotPositiveSemidefiniteError",
    "SingularMatrixError",
]
