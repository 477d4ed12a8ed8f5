"""Shared helpers for the test suite."""

import numpy as np

from qrelent import DensityOperator, Projector, validate_density


def pure(vec) -> DensityOperator:
    """The pure state |v><v| / <v|v>."""
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return validate_density(np.outer(v, v.conj()))


def diag_state(*populations: float) -> DensityOperator:
    """A diagonal state from its populations."""
    return validate_density(np.diag(np.asarray(populations, dtype=complex)))


def basis_projector(dim: int, indices) -> Projector:
    """Projector onto a set of computational basis directions."""
    m = np.zeros((dim, dim), dtype=complex)
    for i in indices:
        m[i, i] = 1.0
    return Projector.validated(m)


def span_projector(columns: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    """Projector onto the span of the given (unnormalized) columns."""
    u, s, _ = np.linalg.svd(np.asarray(columns, dtype=complex), full_matrices=False)
    keep = u[:, s > rtol * s[0]]
    return keep @ keep.conj().T


def exp_hermitian(matrix: np.ndarray) -> np.ndarray:
    """Matrix exponential of a Hermitian matrix via its spectrum."""
    w, v = np.linalg.eigh(np.asarray(matrix, dtype=complex))
    return (v * np.exp(w)) @ v.conj().T
