"""Seeded random states, projector families, and refinements.

All generators are deterministic functions of their integer seed: each
call builds a fresh PCG64 ``numpy`` generator from the seed it was
given and consumes nothing else.  Composite runs derive per-item seeds
with :func:`derive_seed`, which feeds ``(master, *branch_indices)``
through ``numpy.random.SeedSequence`` — so trial ``(dim, k)`` of a
campaign sees the same stream no matter how trials are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSpecError
from .linop import DEFAULT_TOL, DensityOperator, Projector, Tolerances, validate_density
from .lueders import ProjectiveObservable, RefinementPair

__all__ = [
    "GenSpec",
    "derive_seed",
    "haar_unitary",
    "random_density",
    "random_block_projectors",
    "random_refinement",
    "random_state_in_support",
]


@dataclass(frozen=True)
class GenSpec:
    """Parameters for one random draw.

    ``rank=None`` means full rank.  ``block_sizes`` only matters for
    projector-family generation; sizes must be positive and fit in
    ``dim`` (any leftover dimensions become one final block).
    """

    dim: int
    rank: int | None = None
    seed: int = 0
    block_sizes: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise BadSpecError(f"dim must be >= 1, got {self.dim}")
        if self.rank is not None and not 1 <= self.rank <= self.dim:
            raise BadSpecError(f"rank {self.rank} outside [1, {self.dim}]")
        if self.seed < 0:
            raise BadSpecError(f"seed must be non-negative, got {self.seed}")
        if self.block_sizes is not None:
            if not self.block_sizes or any(s < 1 for s in self.block_sizes):
                raise BadSpecError(f"block sizes must be positive, got {self.block_sizes}")
            if sum(self.block_sizes) > self.dim:
                raise BadSpecError(
                    f"block sizes {self.block_sizes} sum to {sum(self.block_sizes)} > dim {self.dim}"
                )

    @property
    def effective_rank(self) -> int:
        return self.dim if self.rank is None else self.rank


def derive_seed(master: int, *branch: int) -> int:
    """Deterministic per-item seed from a master seed and branch indices."""
    if master < 0 or any(b < 0 for b in branch):
        raise BadSpecError("seeds and branch indices must be non-negative")
    ss = np.random.SeedSequence([master, *branch])
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def _haar(rng: np.random.Generator, dim: int) -> np.ndarray:
    # QR of a Ginibre matrix, with the R diagonal's phases folded into
    # Q so the distribution is exactly Haar rather than QR-convention
    # dependent.
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    """A Haar-distributed ``dim x dim`` unitary."""
    if dim < 1:
        raise BadSpecError(f"dim must be >= 1, got {dim}")
    return _haar(_rng(seed), dim)


def random_density(spec: GenSpec, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """A random state of the requested rank (trace-normalized Ginibre)."""
    rng = _rng(spec.seed)
    g = _ginibre(rng, spec.dim, spec.effective_rank)
    m = g @ g.conj().T
    return validate_density(m / np.trace(m).real, tol)


def random_block_projectors(spec: GenSpec, tol: Tolerances = DEFAULT_TOL) -> list[Projector]:
    """Projectors onto random mutually orthogonal subspaces.

    Ranks follow ``spec.block_sizes`` (required); if the sizes do not
    exhaust ``dim``, the orthogonal complement is appended as one more
    block, so the family always resolves the identity.
    """
    if spec.block_sizes is None:
        raise BadSpecError("block_sizes is required for projector generation")
    sizes = list(spec.block_sizes)
    leftover = spec.dim - sum(sizes)
    if leftover > 0:
        sizes.append(leftover)
    u = _haar(_rng(spec.seed), spec.dim)
    out: list[Projector] = []
    start = 0
    for s in sizes:
        cols = u[:, start : start + s]
        out.append(Projector.validated(cols @ cols.conj().T, tol))
        start += s
    return out


def _range_basis(p: Projector) -> np.ndarray:
    """Orthonormal columns spanning the range of a projector."""
    w, v = np.linalg.eigh(p.matrix)
    return v[:, w > 0.5]


def random_state_in_support(
    p: Projector, rank: int, seed: int, tol: Tolerances = DEFAULT_TOL
) -> DensityOperator:
    """A random rank-``rank`` state supported inside ``range(p)``."""
    if p.rank < 1:
        raise BadSpecError("cannot place a state inside a rank-0 projector")
    if not 1 <= rank <= p.rank:
        raise BadSpecError(f"rank {rank} outside [1, {p.rank}]")
    basis = _range_basis(p)
    rng = _rng(seed)
    g = _ginibre(rng, p.rank, rank)
    small = g @ g.conj().T
    small /= np.trace(small).real
    return validate_density(basis @ small @ basis.conj().T, tol)


def _random_composition(rng: np.random.Generator, total: int) -> list[int]:
    """A uniformly random ordered composition of ``total``."""
    if total == 1:
        return [1]
    n_parts = int(rng.integers(1, total + 1))
    if n_parts == 1:
        return [total]
    cuts = np.sort(rng.choice(np.arange(1, total), size=n_parts - 1, replace=False))
    edges = [0, *cuts.tolist(), total]
    return [edges[i + 1] - edges[i] for i in range(len(edges) - 1)]


def random_refinement(
    coarse: list[Projector] | tuple[Projector, ...],
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
    *,
    rank_one: bool = False,
) -> RefinementPair:
    """Split each coarse projector into random orthogonal finer ones.

    Within each coarse subspace a Haar-rotated basis is partitioned
    into consecutive groups (all singletons when ``rank_one=True``);
    the returned pair's grouping is re-derived by the refinement check
    rather than trusted from construction.
    """
    rng = _rng(seed)
    coarse_obs = ProjectiveObservable.validated(range(len(coarse)), tuple(coarse), tol)
    fine_projs: list[Projector] = []
    for p in coarse:
        basis = _range_basis(p)
        rotated = basis @ _haar(rng, p.rank)
        sizes = [1] * p.rank if rank_one else _random_composition(rng, p.rank)
        start = 0
        for s in sizes:
            cols = rotated[:, start : start + s]
            fine_projs.append(Projector.validated(cols @ cols.conj().T, tol))
            start += s
    fine_obs = ProjectiveObservable.validated(range(len(fine_projs)), tuple(fine_projs), tol)
    return RefinementPair.checked(coarse_obs, fine_obs, tol)
