"""Validated operator types and Hermitian spectral primitives.

Everything downstream — entropies, orthogonal decompositions, pinching
maps — is built on what lives here: density operators validated on
construction, support projectors with a *relative* eigenvalue cutoff,
the extended operator logarithm (zero on the kernel), and the pinching
map for an orthogonal projector family.

Conventions
-----------
* All matrices are dense complex ``numpy`` arrays.
* An eigenvalue ``lam`` of an operator with largest eigenvalue
  ``lam_max`` counts as zero iff ``lam <= tol.rank * lam_max``.  The
  cutoff is relative so that the notion of support does not depend on
  an overall scale.
* Scalar sums over eigenvalues use :func:`math.fsum`, so results do not
  depend on summation order.
* Arrays stored on the frozen value types are marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadTraceError,
    DimensionMismatchError,
    MassLossError,
    NotHermitianError,
    NotIdempotentError,
    NotOrthogonalError,
    NotPositiveError,
    SolverFailureError,
)

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "SpectralDecomposition",
    "DensityOperator",
    "Projector",
    "frobenius",
    "symmetrize",
    "eigh",
    "validate_density",
    "support_projector",
    "extended_log",
    "pinch",
    "support_leakage",
    "support_contained",
]


def frobenius(matrix: np.ndarray) -> float:
    """Frobenius norm as a plain float."""
    return float(np.linalg.norm(matrix))


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances used by validation and identity checks.

    Attributes
    ----------
    herm:
        Relative Hermiticity defect allowed on input matrices,
        ``||M - M^dag||_F <= herm * ||M||_F``.
    psd:
        How negative an eigenvalue of a nominally positive matrix may
        be before validation rejects it.
    trace:
        Allowed deviation of a density-matrix trace from 1.
    rank:
        Relative spectral cutoff: eigenvalues ``<= rank * lam_max``
        count as zero (support/rank decisions, extended log).
    supp:
        Threshold on trace mass outside a subspace; decides support
        inclusion and therefore the finite/infinite dichotomy.
    identity:
        Default tolerance for verifying algebraic identities
        (residual norms, completeness of projector families).
    idem:
        Allowed idempotency defect ``||P @ P - P||_F`` for projectors.
    orth:
        Allowed deviation from orthonormality for eigenvector systems,
        entrywise on the Gram matrix.
    recon:
        Allowed spectral reconstruction error
        ``||V diag(w) V^dag - M||_F``, relative to ``max(1, ||M||_F)``.
    """

    herm: float = 1e-10
    psd: float = 1e-10
    trace: float = 1e-8
    rank: float = 1e-10
    supp: float = 1e-9
    identity: float = 1e-8
    idem: float = 1e-10
    orth: float = 1e-10
    recon: float = 1e-10

    def __post_init__(self) -> None:
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if not (isinstance(value, float) and value > 0.0 and math.isfinite(value)):
                raise ValueError(f"tolerance {name!r} must be a finite positive float, got {value!r}")

    def replace(self, **changes: float) -> "Tolerances":
        """A copy with the given fields changed."""
        import dataclasses

        return dataclasses.replace(self, **changes)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem of a Hermitian matrix.

    ``eigenvalues`` is real and ascending; column ``k`` of
    ``eigenvectors`` is the eigenvector for ``eigenvalues[k]``.
    Instances are produced by :func:`eigh` and are assumed valid; they
    are not re-checked on attribute access.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])

    def reconstruct(self) -> np.ndarray:
        """``V diag(w) V^dag`` as a fresh writable array."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True)
class DensityOperator:
    """A validated quantum state.

    ``matrix`` is rebuilt from the cleaned ``spectrum`` during
    validation, so the two fields are exactly consistent: eigenvalues
    are clamped to ``>= 0`` and renormalized to sum to 1, and
    ``matrix == V diag(w) V^dag`` up to round-off.  Construct through
    :func:`validate_density`.
    """

    matrix: np.ndarray
    spectrum: SpectralDecomposition

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class Projector:
    """An orthogonal (Hermitian, idempotent) projector with known rank."""

    matrix: np.ndarray
    rank: int

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @classmethod
    def validated(cls, raw: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> "Projector":
        """Validate an externally supplied matrix as an orthogonal projector.

        Raises
        ------
        NotHermitianError
            If ``raw`` is not square or not Hermitian within ``tol.herm``.
        NotIdempotentError
            If ``||P @ P - P||_F > tol.idem``.
        """
        m = symmetrize(raw, tol)
        defect = frobenius(m @ m - m)
        if defect > tol.idem * max(1.0, frobenius(m)):
            raise NotIdempotentError(f"projector defect ||P^2 - P||_F = {defect:.3e}")
        rank = int(round(float(np.trace(m).real)))
        return cls(matrix=_readonly(m), rank=rank)

    @classmethod
    def zero(cls, dim: int) -> "Projector":
        """The rank-0 projector on a ``dim``-dimensional space."""
        return cls(matrix=_readonly(np.zeros((dim, dim), dtype=complex)), rank=0)


def symmetrize(raw: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Check Hermiticity and return the exactly Hermitian part.

    The input must satisfy ``||M - M^dag||_F <= tol.herm * ||M||_F``;
    the returned matrix is ``(M + M^dag) / 2``, which removes the
    round-off asymmetry without changing the operator it represents.

    Raises
    ------
    NotHermitianError
        If the matrix is not square, or the defect exceeds the bound.
    """
    m = np.asarray(raw, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {m.shape}")
    scale = frobenius(m)
    defect = frobenius(m - m.conj().T)
    if defect > tol.herm * max(scale, 1e-300):
        raise NotHermitianError(
            f"Hermiticity defect {defect:.3e} exceeds {tol.herm:.1e} * ||M||_F = {tol.herm * scale:.3e}"
        )
    return (m + m.conj().T) / 2.0


def eigh(matrix: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, with quality checks.

    Beyond calling the solver, this verifies that the eigenvector
    system is orthonormal (Gram matrix within ``tol.orth`` of the
    identity, entrywise) and that ``V diag(w) V^dag`` reconstructs the
    input within ``tol.recon`` relative to ``max(1, ||M||_F)``.

    Raises
    ------
    SolverFailureError
        If the solver does not converge or a quality check fails.
    """
    m = np.asarray(matrix, dtype=complex)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise SolverFailureError(f"eigensolver failed: {exc}") from exc
    gram_defect = float(np.abs(v.conj().T @ v - np.eye(m.shape[0])).max())
    if gram_defect > tol.orth:
        raise SolverFailureError(f"eigenvectors not orthonormal: defect {gram_defect:.3e}")
    recon_defect = frobenius((v * w) @ v.conj().T - m)
    if recon_defect > tol.recon * max(1.0, frobenius(m)):
        raise SolverFailureError(f"spectral reconstruction error {recon_defect:.3e}")
    return SpectralDecomposition(eigenvalues=_readonly(w), eigenvectors=_readonly(v))


def validate_density(raw: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """Validate a raw matrix as a quantum state and clean it up.

    Checks, in order: Hermiticity (``tol.herm``, relative), positivity
    (all eigenvalues ``>= -tol.psd``), and unit trace (``tol.trace``,
    checked on the input before any repair).  On success the spectrum
    is clamped to ``>= 0`` and renormalized to sum to exactly 1, and
    the stored matrix is rebuilt from that cleaned spectrum.

    Raises
    ------
    NotHermitianError, NotPositiveError, BadTraceError, SolverFailureError
    """
    m = symmetrize(raw, tol)
    spec = eigh(m, tol)
    w = spec.eigenvalues
    if float(w[0]) < -tol.psd:
        raise NotPositiveError(f"smallest eigenvalue {float(w[0]):.3e} below -{tol.psd:.1e}")
    trace = math.fsum(float(x) for x in w)
    if abs(trace - 1.0) > tol.trace:
        raise BadTraceError(f"trace {trace!r} differs from 1 by more than {tol.trace:.1e}")
    w = np.clip(w, 0.0, None)
    w = w / math.fsum(float(x) for x in w)
    v = spec.eigenvectors
    matrix = (v * w) @ v.conj().T
    matrix = (matrix + matrix.conj().T) / 2.0
    cleaned = SpectralDecomposition(eigenvalues=_readonly(w), eigenvectors=v)
    return DensityOperator(matrix=_readonly(matrix), spectrum=cleaned)


def _support_columns(spec: SpectralDecomposition, tol: Tolerances) -> np.ndarray:
    """Eigenvector columns whose eigenvalues count as nonzero."""
    w = spec.eigenvalues
    lam_max = float(w[-1])
    if lam_max <= 0.0:
        return spec.eigenvectors[:, :0]
    keep = w > tol.rank * lam_max
    return spec.eigenvectors[:, keep]


def support_projector(rho: DensityOperator, tol: Tolerances = DEFAULT_TOL) -> Projector:
    """Projector onto the support (range) of a state.

    Eigenvalues at or below ``tol.rank * lam_max`` are treated as zero,
    so the rank reported here is the numerically meaningful one.  The
    result satisfies ``P @ rho == rho @ P == rho`` up to round-off.
    """
    cols = _support_columns(rho.spectrum, tol)
    p = cols @ cols.conj().T
    p = (p + p.conj().T) / 2.0
    return Projector(matrix=_readonly(p), rank=int(cols.shape[1]))


def extended_log(matrix: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Operator logarithm extended by zero on the kernel.

    For a positive-semidefinite Hermitian ``M`` with spectral
    decomposition ``sum_k lam_k P_k``, returns
    ``sum_{lam_k > cutoff} ln(lam_k) P_k`` with
    ``cutoff = tol.rank * lam_max``: the ordinary logarithm on the
    support, and zero — not ``-inf`` — on the kernel.  Infinities are
    handled by callers through explicit support tests, never by letting
    ``log(0)`` escape into arithmetic.

    The zero matrix maps to the zero matrix.

    Raises
    ------
    NotHermitianError
        If ``matrix`` is not Hermitian within ``tol.herm``.
    NotPositiveError
        If an eigenvalue is below ``-tol.psd``.
    """
    m = symmetrize(matrix, tol)
    spec = eigh(m, tol)
    w = spec.eigenvalues
    if float(w[0]) < -tol.psd:
        raise NotPositiveError(f"extended log of a non-positive matrix (lambda_min = {float(w[0]):.3e})")
    lam_max = float(w[-1])
    logs = np.zeros_like(w)
    if lam_max > 0.0:
        keep = w > tol.rank * lam_max
        logs[keep] = np.log(w[keep])
    v = spec.eigenvectors
    out = (v * logs) @ v.conj().T
    return (out + out.conj().T) / 2.0


def pinch(
    rho: DensityOperator,
    projectors: tuple[Projector, ...] | list[Projector],
    tol: Tolerances = DEFAULT_TOL,
) -> DensityOperator:
    """Apply the pinching map ``rho -> sum_k P_k rho P_k``.

    The projectors must be mutually orthogonal and, together, must
    capture the state's trace mass; coherences between the subspaces
    are destroyed, populations within them are kept.

    Raises
    ------
    DimensionMismatchError
        If a projector lives on a different dimension than ``rho``.
    NotOrthogonalError
        If some pair has ``||P_i @ P_j||_F > tol.identity``.
    MassLossError
        If the pinched trace falls below ``1 - tol.supp`` (the family
        does not cover the state's support).
    """
    d = rho.dim
    for p in projectors:
        if p.dim != d:
            raise DimensionMismatchError(f"projector on dim {p.dim}, state on dim {d}")
    _check_mutually_orthogonal(projectors, tol)
    out = np.zeros((d, d), dtype=complex)
    for p in projectors:
        out += p.matrix @ rho.matrix @ p.matrix
    kept = float(np.trace(out).real)
    if kept < 1.0 - tol.supp:
        raise MassLossError(f"pinching kept only trace {kept!r} of the state")
    return validate_density(out, tol)


def _check_mutually_orthogonal(
    projectors: tuple[Projector, ...] | list[Projector], tol: Tolerances
) -> None:
    for i in range(len(projectors)):
        for j in range(i + 1, len(projectors)):
            overlap = frobenius(projectors[i].matrix @ projectors[j].matrix)
            if overlap > tol.identity:
                raise NotOrthogonalError(
                    f"projectors {i} and {j} overlap: ||P_i P_j||_F = {overlap:.3e}"
                )


def support_leakage(rho: DensityOperator, sigma: DensityOperator, tol: Tolerances = DEFAULT_TOL) -> float:
    """Trace mass of ``rho`` outside the support of ``sigma``.

    Returns ``1 - tr(rho P)`` with ``P`` the support projector of
    ``sigma``, clamped at 0.  This is the quantity the finite/infinite
    dichotomy is decided on.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"states on dims {rho.dim} and {sigma.dim}")
    p = support_projector(sigma, tol)
    kept = float(np.einsum("ij,ji->", rho.matrix, p.matrix).real)
    return max(0.0, 1.0 - kept)


def support_contained(rho: DensityOperator, sigma: DensityOperator, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether ``supp(rho)`` is contained in ``supp(sigma)``.

    True iff the leakage ``1 - tr(rho P_sigma)`` is at most
    ``tol.supp``.  This structural test — not cancellation of
    logarithms — gates every finite/infinite decision in the package.
    """
    return support_leakage(rho, sigma, tol) <= tol.supp
