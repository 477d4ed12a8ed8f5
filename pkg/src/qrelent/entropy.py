"""Entropies with first-class infinity semantics.

All entropies are in nats (natural logarithm); conversion to bits is a
presentation concern and happens only at output layers.  Relative
entropies return :class:`ExtendedReal`, whose infinite value is a
tagged state decided by an explicit support test — ``float('inf')``
never appears as the *result* of evaluating ``log(0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, LengthMismatchError, NotPositiveError, BadTraceError
from .linop import (
    DEFAULT_TOL,
    DensityOperator,
    Tolerances,
    extended_log,
    support_contained,
)

__all__ = [
    "ExtendedReal",
    "INFINITY",
    "ProbabilityVector",
    "shannon_entropy",
    "classical_relative_entropy",
    "von_neumann_entropy",
    "quantum_relative_entropy",
]


@dataclass(frozen=True)
class ExtendedReal:
    """A value in ``[0, +inf]``: either a finite float or the tag ``+inf``.

    ``value is None`` encodes ``+inf``.  Arithmetic is deliberately
    minimal — addition and comparison against floats — because the
    point of the type is to keep infinity from silently mixing into
    float arithmetic.
    """

    value: float | None

    @classmethod
    def finite(cls, x: float) -> "ExtendedReal":
        if not math.isfinite(x):
            raise ValueError(f"finite() called with {x!r}")
        return cls(float(x))

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __add__(self, other: "ExtendedReal") -> "ExtendedReal":
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        if self.value is None or other.value is None:
            return INFINITY
        return ExtendedReal(self.value + other.value)

    def as_float(self) -> float:
        """The value with ``+inf`` mapped to ``math.inf`` (display/compare only)."""
        return math.inf if self.value is None else self.value

    def __str__(self) -> str:
        return "inf" if self.value is None else repr(self.value)


INFINITY = ExtendedReal(None)


@dataclass(frozen=True)
class ProbabilityVector:
    """A classical distribution as a read-only float array.

    :meth:`validated` is the checked constructor for external input:
    entries may be slightly negative (clamped to 0 if above ``-tol.psd``)
    and the total must be 1 within ``tol.trace``; the entries are *not*
    renormalized.  Direct construction skips the checks — internal code
    uses that for diagnostic vectors that are intentionally
    subnormalized (e.g. block weights of a state that leaks support).
    """

    probs: np.ndarray

    @classmethod
    def validated(cls, raw, tol: Tolerances = DEFAULT_TOL) -> "ProbabilityVector":
        p = np.asarray(raw, dtype=float).copy()
        if p.ndim != 1:
            raise LengthMismatchError(f"expected a 1-D vector, got shape {p.shape}")
        if float(p.min(initial=0.0)) < -tol.psd:
            raise NotPositiveError(f"negative probability {float(p.min()):.3e}")
        p = np.clip(p, 0.0, None)
        total = math.fsum(float(x) for x in p)
        if abs(total - 1.0) > tol.trace:
            raise BadTraceError(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        return cls(probs=p)

    def __len__(self) -> int:
        return int(self.probs.shape[0])


def shannon_entropy(p: ProbabilityVector) -> float:
    """Shannon entropy ``H(p) = -sum_k p_k ln p_k`` in nats.

    Zero entries contribute zero (the ``0 ln 0 = 0`` convention).
    """
    return -math.fsum(x * math.log(x) for x in p.probs.tolist() if x > 0.0) + 0.0


def classical_relative_entropy(
    p: ProbabilityVector, w: ProbabilityVector, tol: Tolerances = DEFAULT_TOL
) -> ExtendedReal:
    """Classical relative entropy ``H(p||w) = sum_k p_k (ln p_k - ln w_k)``.

    Dichotomy first: if some ``k`` has ``p_k`` nonzero but ``w_k`` zero
    (both judged against ``tol.supp``), the result is ``+inf``.
    Otherwise the sum runs over the entries where ``p_k`` is nonzero.

    Raises
    ------
    LengthMismatchError
        If the vectors have different lengths.
    """
    if len(p) != len(w):
        raise LengthMismatchError(f"distributions of lengths {len(p)} and {len(w)}")
    pv = p.probs.tolist()
    wv = w.probs.tolist()
    if any(pk > tol.supp and wk <= tol.supp for pk, wk in zip(pv, wv)):
        return INFINITY
    return ExtendedReal.finite(
        math.fsum(pk * (math.log(pk) - math.log(wk)) for pk, wk in zip(pv, wv) if pk > tol.supp)
    )


def von_neumann_entropy(rho: DensityOperator, tol: Tolerances = DEFAULT_TOL) -> float:
    """Von Neumann entropy ``S(rho) = -tr(rho ln rho)`` in nats.

    Computed from the validated spectrum; eigenvalues at or below
    ``tol.rank * lam_max`` count as zero and contribute nothing.
    """
    w = rho.spectrum.eigenvalues
    cutoff = tol.rank * float(w[-1])
    return -math.fsum(x * math.log(x) for x in w.tolist() if x > cutoff) + 0.0


def _spectrum_log_moment(rho: DensityOperator, tol: Tolerances) -> float:
    """``tr(rho ln rho)`` over the support of ``rho``."""
    w = rho.spectrum.eigenvalues
    cutoff = tol.rank * float(w[-1])
    return math.fsum(x * math.log(x) for x in w.tolist() if x > cutoff)


def quantum_relative_entropy(
    rho: DensityOperator, sigma: DensityOperator, tol: Tolerances = DEFAULT_TOL
) -> ExtendedReal:
    """Quantum relative entropy ``S(rho||sigma)`` in nats.

    The finite/infinite dichotomy is decided structurally: if
    ``supp(rho)`` is not contained in ``supp(sigma)`` (trace leakage
    above ``tol.supp``), the result is the tagged ``+inf``.  Only when
    containment holds is the finite value

        ``tr(rho ln rho) - tr(rho logz(sigma))``

    evaluated, with ``logz`` the kernel-extended logarithm; the kernel
    of ``sigma`` then carries no weight of ``rho``, so the extension by
    zero does not distort the value.

    Raises
    ------
    DimensionMismatchError
        If the states live on different dimensions.
    """
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"states on dims {rho.dim} and {sigma.dim}")
    if not support_contained(rho, sigma, tol):
        return INFINITY
    first = _spectrum_log_moment(rho, tol)
    log_sigma = extended_log(sigma.matrix, tol)
    second = float(np.einsum("ij,ji->", rho.matrix, log_sigma).real)
    return ExtendedReal.finite(first - second)
