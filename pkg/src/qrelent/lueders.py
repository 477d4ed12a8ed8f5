"""Projective measurements, Lüders states, and straight-line identities.

The non-selective Lüders state of ``rho`` under a projective observable
is the pinching ``sum_i P_i rho P_i``.  Its distance from ``rho`` in
relative entropy is an entropy *gap*, refining a measurement decomposes
that distance additively, and pinching in an eigenbasis of a reference
state ``sigma`` places the pinched state on the straight line between
``rho`` and ``sigma``.  Each check here computes every distance
independently and reports the pieces, so the caller compares rather
than trusts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotARefinementError,
    NotOrthonormalError,
    SupportViolationError,
)
from .linop import (
    DEFAULT_TOL,
    DensityOperator,
    Projector,
    Tolerances,
    frobenius,
    pinch,
    support_contained,
    validate_density,
    _check_mutually_orthogonal,
)
from .entropy import ExtendedReal, quantum_relative_entropy, von_neumann_entropy

__all__ = [
    "ProjectiveObservable",
    "RefinementPair",
    "LineReport",
    "detectable_projectors",
    "lueders_state",
    "corollary1_check",
    "is_refinement",
    "corollary2_check",
    "theorem2_check",
]


@dataclass(frozen=True)
class ProjectiveObservable:
    """A projective (von Neumann) observable: eigenvalues + eigenprojectors.

    Build through :meth:`validated`, which enforces distinct
    eigenvalues, mutual orthogonality, and completeness
    ``sum_i P_i = 1``.
    """

    eigenvalues: tuple[float, ...]
    projectors: tuple[Projector, ...]

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    @classmethod
    def validated(
        cls,
        eigenvalues,
        projectors,
        tol: Tolerances = DEFAULT_TOL,
    ) -> "ProjectiveObservable":
        eigs = tuple(float(a) for a in eigenvalues)
        projs = tuple(projectors)
        if len(eigs) != len(projs) or not projs:
            raise ValueError("need one eigenvalue per projector (and at least one)")
        if len(set(eigs)) != len(eigs):
            raise ValueError(f"eigenvalues must be distinct, got {eigs}")
        d = projs[0].dim
        for p in projs:
            if p.dim != d:
                raise DimensionMismatchError("projectors on mixed dimensions")
        _check_mutually_orthogonal(projs, tol)
        total = np.zeros((d, d), dtype=complex)
        for p in projs:
            total += p.matrix
        defect = frobenius(total - np.eye(d))
        if defect > tol.identity:
            raise ValueError(f"projectors do not resolve the identity: defect {defect:.3e}")
        return cls(eigenvalues=eigs, projectors=projs)


def detectable_projectors(
    rho: DensityOperator, obs: ProjectiveObservable, tol: Tolerances = DEFAULT_TOL
) -> list[Projector]:
    """The outcome projectors the state can actually trigger.

    Returns the ``P_i`` with ``tr(rho P_i) > tol.supp``, in the
    observable's order.
    """
    out = []
    for p in obs.projectors:
        weight = float(np.einsum("ij,ji->", rho.matrix, p.matrix).real)
        if weight > tol.supp:
            out.append(p)
    return out


def lueders_state(
    rho: DensityOperator,
    obs: ProjectiveObservable,
    tol: Tolerances = DEFAULT_TOL,
    *,
    detectable_only: bool = False,
) -> DensityOperator:
    """Non-selective post-measurement state ``sum_i P_i rho P_i``.

    With ``detectable_only=True`` the sum runs only over outcomes with
    nonzero probability — a distinct code path that must agree with the
    full sum, since zero-probability outcomes contribute nothing.
    """
    if detectable_only:
        kept = detectable_projectors(rho, obs, tol)
        out = np.zeros((rho.dim, rho.dim), dtype=complex)
        for p in kept:
            out += p.matrix @ rho.matrix @ p.matrix
        return validate_density(out, tol)
    return pinch(rho, obs.projectors, tol)


def corollary1_check(
    rho: DensityOperator, obs: ProjectiveObservable, tol: Tolerances = DEFAULT_TOL
) -> tuple[ExtendedReal, float]:
    """Distance to the Lüders state vs the entropy gap.

    Returns ``(S(rho || rho_L), S(rho_L) - S(rho))`` computed by
    independent routes.  The identity says they are equal — in
    particular the distance is finite, because the Lüders state's
    support always contains the state's own.
    """
    rho_l = lueders_state(rho, obs, tol)
    direct = quantum_relative_entropy(rho, rho_l, tol)
    gap = von_neumann_entropy(rho_l, tol) - von_neumann_entropy(rho, tol)
    return direct, gap


def is_refinement(
    fine: ProjectiveObservable,
    coarse: ProjectiveObservable,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[int, ...]:
    """Check that ``fine`` refines ``coarse``; return the grouping.

    Entry ``j`` of the result is the index of the coarse projector that
    absorbs fine projector ``j`` (``P_coarse @ P_fine == P_fine``).
    Each fine projector must match exactly one coarse projector, and
    each coarse projector must equal the sum of its group.

    Raises
    ------
    NotARefinementError
        If either condition fails.
    DimensionMismatchError
        If the observables live on different dimensions.
    """
    if fine.dim != coarse.dim:
        raise DimensionMismatchError(f"observables on dims {fine.dim} and {coarse.dim}")
    grouping: list[int] = []
    for j, pf in enumerate(fine.projectors):
        matches = [
            k
            for k, pc in enumerate(coarse.projectors)
            if frobenius(pc.matrix @ pf.matrix - pf.matrix) <= tol.identity
        ]
        if len(matches) != 1:
            raise NotARefinementError(
                f"fine projector {j} is absorbed by {len(matches)} coarse projectors, need exactly 1"
            )
        grouping.append(matches[0])
    for k, pc in enumerate(coarse.projectors):
        total = np.zeros((fine.dim, fine.dim), dtype=complex)
        for j, g in enumerate(grouping):
            if g == k:
                total += fine.projectors[j].matrix
        if frobenius(total - pc.matrix) > tol.identity:
            raise NotARefinementError(f"coarse projector {k} is not the sum of its fine group")
    return tuple(grouping)


@dataclass(frozen=True)
class RefinementPair:
    """A coarse observable and a fine one that refines it."""

    coarse: ProjectiveObservable
    fine: ProjectiveObservable
    grouping: tuple[int, ...]

    @classmethod
    def checked(
        cls,
        coarse: ProjectiveObservable,
        fine: ProjectiveObservable,
        tol: Tolerances = DEFAULT_TOL,
    ) -> "RefinementPair":
        return cls(coarse=coarse, fine=fine, grouping=is_refinement(fine, coarse, tol))


@dataclass(frozen=True)
class LineReport:
    """Three relative-entropy distances along ``rho -> middle -> target``.

    ``d_total = S(rho || target)``, ``d_first = S(rho || middle)``,
    ``d_second = S(middle || target)``.  On the straight-line
    identities ``d_total = d_first + d_second``.
    """

    d_total: ExtendedReal
    d_first: ExtendedReal
    d_second: ExtendedReal

    @property
    def residual(self) -> float | None:
        """``|d_total - (d_first + d_second)|``, or ``None`` if any leg is infinite."""
        if not (self.d_total.is_finite and self.d_first.is_finite and self.d_second.is_finite):
            return None
        return abs(self.d_total.value - (self.d_first.value + self.d_second.value))

    @property
    def all_finite(self) -> bool:
        return self.d_total.is_finite and self.d_first.is_finite and self.d_second.is_finite


def corollary2_check(
    rho: DensityOperator, pair: RefinementPair, tol: Tolerances = DEFAULT_TOL
) -> tuple[LineReport, float]:
    """Additivity of measurement distance under refinement.

    With ``rho_A`` the Lüders state for the coarse observable and
    ``rho_B`` for the fine one, returns the line report for
    ``S(rho || rho_B) = S(rho || rho_A) + S(rho_A || rho_B)`` together
    with the composition residual
    ``|| (rho_A)_L(fine) - rho_B ||_F`` — measuring fine after coarse
    must land on the fine Lüders state directly.
    """
    rho_a = lueders_state(rho, pair.coarse, tol)
    rho_b = lueders_state(rho, pair.fine, tol)
    report = LineReport(
        d_total=quantum_relative_entropy(rho, rho_b, tol),
        d_first=quantum_relative_entropy(rho, rho_a, tol),
        d_second=quantum_relative_entropy(rho_a, rho_b, tol),
    )
    composed = lueders_state(rho_a, pair.fine, tol)
    composition_residual = frobenius(composed.matrix - rho_b.matrix)
    return report, composition_residual


def theorem2_check(
    rho: DensityOperator,
    sigma: DensityOperator,
    tol: Tolerances = DEFAULT_TOL,
    basis: np.ndarray | None = None,
) -> tuple[LineReport, DensityOperator]:
    """Straight line through the eigenbasis-pinched state.

    Pinches ``rho`` in an orthonormal eigenbasis of ``sigma`` to get
    ``M`` and returns the line report for
    ``S(rho || sigma) = S(rho || M) + S(M || sigma)`` plus ``M``
    itself.  For degenerate ``sigma`` the eigenbasis is not unique;
    pass ``basis`` (columns) to pick one explicitly — it must be
    orthonormal and diagonalize ``sigma``.

    Raises
    ------
    SupportViolationError
        If ``supp(rho)`` is not contained in ``supp(sigma)``; the
        identity is only claimed under that hypothesis.
    NotOrthonormalError
        If an explicit basis is not orthonormal within ``tol.orth``.
    ValueError
        If an explicit basis does not diagonalize ``sigma``.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"states on dims {rho.dim} and {sigma.dim}")
    if not support_contained(rho, sigma, tol):
        raise SupportViolationError("state support leaks outside the reference support")

    if basis is None:
        v = sigma.spectrum.eigenvectors
    else:
        v = np.asarray(basis, dtype=complex)
        if v.shape != (sigma.dim, sigma.dim):
            raise NotOrthonormalError(f"need a full square basis, got shape {v.shape}")
        gram_defect = float(np.abs(v.conj().T @ v - np.eye(sigma.dim)).max())
        if gram_defect > tol.orth:
            raise NotOrthonormalError(f"basis not orthonormal: defect {gram_defect:.3e}")
        rotated = v.conj().T @ sigma.matrix @ v
        off = rotated - np.diag(np.diag(rotated))
        if frobenius(off) > tol.identity:
            raise ValueError(f"basis does not diagonalize the reference state: off-diagonal {frobenius(off):.3e}")

    # Pinching in an orthonormal basis keeps the diagonal of rho in
    # that basis and kills everything else.
    rotated_rho = v.conj().T @ rho.matrix @ v
    pinched = (v * np.diag(rotated_rho).real) @ v.conj().T
    middle = validate_density(pinched, tol)

    report = LineReport(
        d_total=quantum_relative_entropy(rho, sigma, tol),
        d_first=quantum_relative_entropy(rho, middle, tol),
        d_second=quantum_relative_entropy(middle, sigma, tol),
    )
    return report, middle
