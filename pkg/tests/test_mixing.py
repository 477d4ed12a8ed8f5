"""Orthogonal decompositions and the mixing identities."""

import math

import numpy as np
import pytest

from qrelent import (
    DimensionMismatchError,
    GenSpec,
    LeakedSupportError,
    LengthMismatchError,
    NotOrthogonalError,
    NotOrthonormalError,
    ProbabilityVector,
    Projector,
    classical_embedding_check,
    decompose_by_projectors,
    entropy_mixing_identity,
    extended_log,
    frobenius,
    haar_unitary,
    lemma1_log_decomposition,
    quantum_relative_entropy,
    random_block_projectors,
    random_state_in_support,
    support_lemma_check,
    support_projector,
    theorem1_breakdown,
    validate_density,
)
from helpers import basis_projector, diag_state, pure

LN2 = math.log(2.0)


def two_block_fixture():
    sigma = diag_state(0.5, 0.25, 0.25)
    blocks = [basis_projector(3, [0]), basis_projector(3, [1, 2])]
    return sigma, blocks


def random_decomposition(dim, seed, ranks=None):
    """A mixed state over two random orthogonal blocks, decomposed."""
    rng = np.random.default_rng(seed)
    split = int(rng.integers(1, dim))
    blocks = random_block_projectors(
        GenSpec(dim=dim, seed=seed, block_sizes=(split, dim - split))
    )
    if ranks is None:
        ranks = [b.rank for b in blocks]
    w = rng.dirichlet(np.ones(len(blocks))) + 0.15
    w /= w.sum()
    mixture = sum(
        wk * random_state_in_support(b, r, seed + 13 + i).matrix
        for i, (b, r, wk) in enumerate(zip(blocks, ranks, w.tolist()))
    )
    return decompose_by_projectors(validate_density(mixture), blocks)


# -- decompose_by_projectors ---------------------------------------------


def test_decompose_oracle():
    sigma, blocks = two_block_fixture()
    d = decompose_by_projectors(sigma, blocks)
    assert np.allclose(d.weights.probs, [0.5, 0.5], atol=1e-14)
    assert frobenius(d.parts[0].matrix - np.diag([1.0, 0, 0])) < 1e-12
    assert frobenius(d.parts[1].matrix - np.diag([0.0, 0.5, 0.5])) < 1e-12
    assert d.supports[0].rank == 1 and d.supports[1].rank == 2
    assert frobenius(d.sigma.matrix - sigma.matrix) < 1e-12


def test_decompose_zero_weight_block():
    sigma = diag_state(0.5, 0.5, 0.0)
    d = decompose_by_projectors(sigma, [basis_projector(3, [0, 1]), basis_projector(3, [2])])
    assert d.parts[1] is None
    assert d.supports[1].rank == 0
    assert d.weights.probs[1] == 0.0


def test_decompose_rejects_leaked_support():
    sigma = validate_density(np.eye(3) / 3)
    with pytest.raises(LeakedSupportError):
        decompose_by_projectors(sigma, [basis_projector(3, [0]), basis_projector(3, [1])])


def test_decompose_leak_boundary(tol):
    eps_ok = tol.supp / 10
    ok = diag_state(1.0 - eps_ok, eps_ok)
    decompose_by_projectors(ok, [basis_projector(2, [0])])  # no raise
    eps_bad = 10 * tol.supp
    bad = diag_state(1.0 - eps_bad, eps_bad)
    with pytest.raises(LeakedSupportError):
        decompose_by_projectors(bad, [basis_projector(2, [0])])


def test_decompose_rejects_overlap():
    sigma = validate_density(np.eye(2) / 2)
    with pytest.raises(NotOrthogonalError):
        decompose_by_projectors(sigma, [basis_projector(2, [0]), Projector.validated(np.eye(2))])


def test_decompose_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        decompose_by_projectors(diag_state(0.5, 0.5), [basis_projector(3, [0])])


def test_decompose_rank_deficient_part():
    # second block hosts a rank-1 state inside a 2-dim subspace
    part = random_state_in_support(basis_projector(3, [1, 2]), 1, 5)
    sigma = validate_density(0.5 * np.diag([1.0, 0, 0]) + 0.5 * part.matrix)
    d = decompose_by_projectors(sigma, [basis_projector(3, [0]), basis_projector(3, [1, 2])])
    assert d.supports[1].rank == 1  # support, not block, rank


# -- lemma1 --------------------------------------------------------------


def test_lemma1_oracle():
    sigma, blocks = two_block_fixture()
    d = decompose_by_projectors(sigma, blocks)
    expected = np.diag([math.log(0.5), math.log(0.25), math.log(0.25)])
    assert frobenius(lemma1_log_decomposition(d) - expected) < 1e-12
    assert frobenius(lemma1_log_decomposition(d) - extended_log(sigma.matrix)) < 1e-12


def test_lemma1_with_zero_weight_and_deficient_parts():
    part = random_state_in_support(basis_projector(4, [2, 3]), 1, 11)
    sigma = validate_density(0.6 * np.diag([1.0, 0, 0, 0]) + 0.4 * part.matrix)
    blocks = [basis_projector(4, [0]), basis_projector(4, [1]), basis_projector(4, [2, 3])]
    d = decompose_by_projectors(sigma, blocks)
    assert d.parts[1] is None  # zero-weight block
    resid = frobenius(lemma1_log_decomposition(d) - extended_log(sigma.matrix))
    assert resid <= 1e-10


@pytest.mark.parametrize("dim,seed", [(2, 0), (3, 1), (5, 2), (8, 3), (16, 4)])
def test_lemma1_random(dim, seed, tol):
    d = random_decomposition(dim, seed)
    resid = frobenius(lemma1_log_decomposition(d) - extended_log(d.sigma.matrix))
    assert resid <= tol.identity


# -- entropy mixing (3a) -------------------------------------------------


def test_entropy_mixing_oracle():
    sigma = validate_density(np.eye(4) / 4)
    d = decompose_by_projectors(sigma, [basis_projector(4, [0, 1]), basis_projector(4, [2, 3])])
    lhs, rhs = entropy_mixing_identity(d)
    assert lhs == pytest.approx(math.log(4), abs=1e-12)
    assert rhs == pytest.approx(math.log(4), abs=1e-12)


@pytest.mark.parametrize("dim,seed", [(2, 10), (4, 11), (6, 12), (16, 13)])
def test_entropy_mixing_random(dim, seed):
    d = random_decomposition(dim, seed)
    lhs, rhs = entropy_mixing_identity(d)
    assert abs(lhs - rhs) <= 1e-9


# -- theorem1_breakdown ----------------------------------------------------


def test_breakdown_closed_form_qubit():
    # rho = |+><+|, sigma = diag(3/4, 1/4), blocks {e0}, {e1}
    rho = pure([1.0, 1.0])
    sigma = diag_state(0.75, 0.25)
    d = decompose_by_projectors(sigma, [basis_projector(2, [0]), basis_projector(2, [1])])
    bd = theorem1_breakdown(rho, d)
    assert bd.s_pinched == pytest.approx(LN2, abs=1e-12)
    assert bd.s_rho == pytest.approx(0.0, abs=1e-12)
    assert bd.h_rel.value == pytest.approx(0.5 * math.log(4.0 / 3.0), abs=1e-12)
    assert bd.avg_rel.value == pytest.approx(0.0, abs=1e-12)
    expected_total = 0.5 * math.log(16.0 / 3.0)
    assert bd.total_lhs.value == pytest.approx(expected_total, abs=1e-12)
    assert bd.total_rhs.value == pytest.approx(expected_total, abs=1e-12)
    assert bd.residual <= 1e-12


def test_breakdown_state_confined_to_one_block():
    sigma, blocks = two_block_fixture()
    d = decompose_by_projectors(sigma, blocks)
    rho = pure([1.0, 0.0, 0.0])
    bd = theorem1_breakdown(rho, d)
    assert np.allclose(bd.p.probs, [1.0, 0.0], atol=1e-12)
    assert bd.conditional_states[1] is None
    assert bd.h_rel.value == pytest.approx(LN2, abs=1e-12)
    assert bd.avg_rel.value == pytest.approx(0.0, abs=1e-12)
    assert bd.total_lhs.value == pytest.approx(LN2, abs=1e-12)
    assert bd.residual <= 1e-12


def test_breakdown_infinite_consistency_by_hand():
    sigma = diag_state(0.5, 0.5, 0.0)
    d = decompose_by_projectors(sigma, [basis_projector(3, [0]), basis_projector(3, [1])])
    rho = diag_state(0.25, 0.25, 0.5)  # half its mass outside supp(sigma)
    bd = theorem1_breakdown(rho, d)
    assert not bd.total_lhs.is_finite
    assert not bd.total_rhs.is_finite
    assert bd.residual is None
    # finite diagnostics are still emitted
    assert bd.s_pinched == pytest.approx(-2 * 0.25 * math.log(0.25), abs=1e-12)
    assert np.allclose(bd.p.probs, [0.25, 0.25], atol=1e-12)
    assert bd.h_rel.is_finite


@pytest.mark.parametrize("dim,seed", [(3, 20), (4, 21), (8, 22), (16, 23)])
def test_breakdown_random_and_support_lemma(dim, seed, tol):
    d = random_decomposition(dim, seed)
    supp = support_projector(d.sigma)
    rho = random_state_in_support(supp, max(1, supp.rank // 2), seed + 99)
    bd = theorem1_breakdown(rho, d)
    assert bd.total_lhs.is_finite and bd.total_rhs.is_finite
    assert bd.residual <= tol.identity
    assert support_lemma_check(rho, d)
    # LHS route really is the direct definition
    direct = quantum_relative_entropy(rho, d.sigma)
    assert bd.total_lhs.value == direct.value


def test_breakdown_dimension_mismatch():
    sigma, blocks = two_block_fixture()
    d = decompose_by_projectors(sigma, blocks)
    with pytest.raises(DimensionMismatchError):
        theorem1_breakdown(diag_state(0.5, 0.5), d)


# -- classical_embedding_check ---------------------------------------------


def test_classical_embedding_oracle():
    p = ProbabilityVector.validated([1.0, 0.0])
    w = ProbabilityVector.validated([0.5, 0.5])
    basis = np.eye(3)[:, :2]
    classical, quantum = classical_embedding_check(p, w, basis)
    assert classical.value == pytest.approx(LN2, abs=1e-12)
    assert quantum.value == pytest.approx(LN2, abs=1e-12)


def test_classical_embedding_infinite_agreement():
    p = ProbabilityVector.validated([0.5, 0.5])
    w = ProbabilityVector.validated([1.0, 0.0])
    classical, quantum = classical_embedding_check(p, w, np.eye(2))
    assert not classical.is_finite and not quantum.is_finite


def test_classical_embedding_random_rotated_basis(tol):
    rng = np.random.default_rng(31)
    p = rng.dirichlet(np.ones(3))
    w = rng.dirichlet(np.ones(3))
    basis = haar_unitary(5, 7)[:, :3]
    classical, quantum = classical_embedding_check(
        ProbabilityVector.validated(p), ProbabilityVector.validated(w), basis
    )
    assert abs(classical.value - quantum.value) <= 1e-10


def test_classical_embedding_rejects_non_orthonormal():
    p = ProbabilityVector.validated([0.5, 0.5])
    basis = np.array([[1.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotOrthonormalError):
        classical_embedding_check(p, p, basis)


def test_classical_embedding_length_mismatch():
    p = ProbabilityVector.validated([0.5, 0.5])
    w = ProbabilityVector.validated([0.5, 0.25, 0.25])
    with pytest.raises(LengthMismatchError):
        classical_embedding_check(p, w, np.eye(3))
