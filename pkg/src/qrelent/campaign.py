"""Randomized verification campaigns over the exact identities.

A campaign draws seeded random fixtures (states, decompositions,
observables) for one named identity, evaluates both sides of that
identity by independent routes, and records a residual — or, for
trials built to violate a support hypothesis, whether both routes
agree on infinity.  Records depend only on the configuration and the
per-trial seed derived from ``(master seed, dim, trial index)``, so a
report is byte-for-byte reproducible regardless of scheduling.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .linop import (
    DEFAULT_TOL,
    DensityOperator,
    Projector,
    Tolerances,
    extended_log,
    frobenius,
    support_contained,
    support_leakage,
    support_projector,
    validate_density,
)
from .entropy import ProbabilityVector
from .mixing import (
    OrthogonalDecomposition,
    classical_embedding_check,
    decompose_by_projectors,
    entropy_mixing_identity,
    lemma1_log_decomposition,
    theorem1_breakdown,
)
from .lueders import ProjectiveObservable, corollary1_check, corollary2_check, lueders_state, theorem2_check
from .stategen import (
    GenSpec,
    derive_seed,
    haar_unitary,
    random_block_projectors,
    random_density,
    random_refinement,
    random_state_in_support,
)

__all__ = [
    "IDENTITIES",
    "VerifyConfig",
    "TrialRecord",
    "CampaignResult",
    "run_campaign",
    "report_document",
    "write_report",
]

IDENTITIES = (
    "lemma1",
    "eq3a",
    "theorem1",
    "corollary1",
    "corollary2",
    "corollary3",
    "theorem2",
)

INFINITE_CONSISTENT = "infinite-consistent"
INFINITE_MISMATCH = "infinite-mismatch"


@dataclass(frozen=True)
class VerifyConfig:
    """What to verify and how hard to try."""

    identity: str
    dims: tuple[int, ...] = (2, 3, 4, 8, 16)
    trials: int = 200
    seed: int = 0
    tol: Tolerances = DEFAULT_TOL
    include_singular: bool = True
    include_infinite: bool = False

    def __post_init__(self) -> None:
        if self.identity not in IDENTITIES:
            raise ConfigError(f"unknown identity {self.identity!r}; expected one of {', '.join(IDENTITIES)}")
        if not self.dims or any(d < 2 for d in self.dims):
            raise ConfigError(f"dims must all be >= 2, got {self.dims}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class TrialRecord:
    """One trial's outcome.

    ``residual`` is a float for finite trials, or one of the strings
    ``"infinite-consistent"`` / ``"infinite-mismatch"`` when at least
    one evaluation route returned infinity.  ``min_nonzero_eig`` is the
    smallest retained eigenvalue of the trial's reference state (a
    conditioning diagnostic); ``leakage`` is the trace mass of the
    probe state outside the reference support, where a probe state
    exists.
    """

    identity: str
    dim: int
    trial: int
    seed: int
    residual: float | str
    min_nonzero_eig: float | None
    leakage: float | None
    passed: bool


@dataclass(frozen=True)
class CampaignResult:
    config: VerifyConfig
    records: tuple[TrialRecord, ...]
    failures: int
    max_residual: float | None
    wall_time: float


def _sub_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


def _min_nonzero_eig(state: DensityOperator, tol: Tolerances) -> float:
    w = state.spectrum.eigenvalues
    cutoff = tol.rank * float(w[-1])
    kept = [x for x in w.tolist() if x > cutoff]
    return min(kept)


def _verdict(lhs_finite: bool, rhs_finite: bool, residual: float | None, tol: Tolerances):
    """Map two routes' outcomes to (record residual, passed)."""
    if lhs_finite and rhs_finite:
        assert residual is not None
        return residual, residual <= tol.identity
    if lhs_finite != rhs_finite:
        return INFINITE_MISMATCH, False
    return INFINITE_CONSISTENT, True


def _random_sizes(rng: np.random.Generator, dim: int, n_blocks: int) -> list[int]:
    """An ordered composition of ``dim`` into ``n_blocks`` positive parts."""
    if n_blocks == 1:
        return [dim]
    cuts = np.sort(rng.choice(np.arange(1, dim), size=n_blocks - 1, replace=False))
    edges = [0, *cuts.tolist(), dim]
    return [edges[i + 1] - edges[i] for i in range(len(edges) - 1)]


def _random_weights(rng: np.random.Generator, n: int, allow_zero: bool) -> np.ndarray:
    # Floor the Dirichlet draw so random weights stay well away from
    # the spectral cutoff; deliberate zeros are inserted separately.
    w = rng.dirichlet(np.ones(n)) + 0.1
    if allow_zero and n >= 2 and rng.random() < 0.3:
        w[int(rng.integers(0, n))] = 0.0
    return w / w.sum()


def _mixture_fixture(
    rng: np.random.Generator,
    blocks: list[Projector],
    tol: Tolerances,
    include_singular: bool,
    allow_zero_weight: bool = True,
) -> OrthogonalDecomposition:
    """A random state mixed over the given blocks, decomposed back."""
    weights = _random_weights(rng, len(blocks), allow_zero_weight)
    dim = blocks[0].dim
    mixture = np.zeros((dim, dim), dtype=complex)
    for b, w in zip(blocks, weights.tolist()):
        if w == 0.0:
            continue
        rank = int(rng.integers(1, b.rank + 1)) if include_singular else b.rank
        part = random_state_in_support(b, rank, _sub_seed(rng), tol)
        mixture += w * part.matrix
    sigma = validate_density(mixture, tol)
    return decompose_by_projectors(sigma, blocks, tol)


def _blocks_fixture(rng: np.random.Generator, dim: int, tol: Tolerances) -> list[Projector]:
    n_blocks = int(rng.integers(2, min(dim, 4) + 1))
    sizes = _random_sizes(rng, dim, n_blocks)
    return random_block_projectors(GenSpec(dim=dim, seed=_sub_seed(rng), block_sizes=tuple(sizes)), tol)


def _trial_lemma1(cfg: VerifyConfig, dim: int, trial: int, seed: int) -> TrialRecord:
    rng = np.random.default_rng(seed)
    d = _mixture_fixture(rng, _blocks_fixture(rng, dim, cfg.tol), cfg.tol, cfg.include_singular)
    lhs = extended_log(d.sigma.matrix, cfg.tol)
    rhs = lemma1_log_decomposition(d, cfg.tol)
    residual = frobenius(lhs - rhs)
    return TrialRecord(
        identity=cfg.identity,
        dim=dim,
        trial=trial,
        seed=seed,
        residual=residual,
        min_nonzero_eig=_min_nonzero_eig(d.sigma, cfg.tol),
        leakage=None,
        passed=residual <= cfg.tol.identity,
    )


def _trial_eq3a(cfg: VerifyConfig, dim: int, trial: int, seed: int) -> TrialRecord:
    rng = np.random.default_rng(seed)
    d = _mixture_fixture(rng, _blocks_fixture(rng, dim, cfg.tol), cfg.tol, cfg.include_singular)
    lhs, rhs = entropy_mixing_identity(d, cfg.tol)
    residual = abs(lhs - rhs)
    return TrialRecord(
        identity=cfg.identity,
        dim=dim,
        trial=trial,
        seed=seed,
        residual=residual,
        min_nonzero_eig=_min_nonzero_eig(d.sigma, cfg.tol),
        leakage=None,
        passed=residual <= cfg.tol.identity,
    )


def _infinite_slot(cfg: VerifyConfig, trial: int) -> bool:
    return cfg.include_infinite and trial % 3 == 2


def _trial_theorem1(cfg: VerifyConfig, dim: int, trial: int, seed: int) -> TrialRecord:
    rng = np.random.default_rng(seed)
    tol = cfg.tol
    if _infinite_slot(cfg, trial):
        # Confine sigma to all blocks but the last; give rho mass there,
        # so both evaluation routes must independently report +inf.
        blocks = _blocks_fixture(rng, dim, tol)
        inside, outside = blocks[:-1], blocks[-1]
        d = _mixture_fixture(rng, inside, tol, cfg.include_singular, allow_zero_weight=False)
        rho_out = random_state_in_support(outside, 1, _sub_seed(rng), tol)
        supp = support_projector(d.sigma, tol)
        rho_in = random_state_in_support(supp, int(rng.integers(1, supp.rank + 1)), _sub_seed(rng), tol)
        mix = rng.uniform(0.2, 0.8)
        rho = validate_density(mix * rho_in.matrix + (1.0 - mix) * rho_out.matrix, tol)
    else:
        d = _mixture_fixture(rng, _blocks_fixture(rng, dim, tol), tol, cfg.include_singular)
        supp = support_projector(d.sigma, tol)
        options = sorted({1, math.ceil(dim / 2), dim} if cfg.include_singular else {dim})
        options = [r for r in options if r <= supp.rank] or [supp.rank]
        rank = int(options[int(rng.integers(0, len(options)))])
        if rng.random() < 0.25:
            # Confine rho to a single populated block: some p_k are then
            # exactly zero and the primed sums must cope.
            populated = [q for q in d.supports if q.rank >= 1]
            q = populated[int(rng.integers(0, len(populated)))]
            rho = random_state_in_support(q, min(rank, q.rank), _sub_seed(rng), tol)
        else:
            rho = random_state_in_support(supp, rank, _sub_seed(rng), tol)

    bd = theorem1_breakdown(rho, d, tol)
    residual, passed = _verdict(bd.total_lhs.is_finite, bd.total_rhs.is_finite, bd.residual, tol)
    return TrialRecord(
        identity=cfg.identity,
        dim=dim,
        trial=trial,
        seed=seed,
        residual=residual,
        min_nonzero_eig=_min_nonzero_eig(d.sigma, tol),
        leakage=support_leakage(rho, d.sigma, tol),
        passed=passed,
    )


def _random_probe(rng: np.random.Generator, dim: int, include_singular: bool, tol: Tolerances) -> DensityOperator:
    rank = int(rng.integers(1, dim + 1)) if include_singular else dim
    return random_density(GenSpec(dim=dim, rank=rank, seed=_sub_seed(rng)), tol)


def _trial_corollary1(cfg: VerifyConfig, dim: int, trial: int, seed: int) -> TrialRecord:
    rng = np.random.default_rng(seed)
    tol = cfg.tol
    blocks = _blocks_fixture(rng, dim, tol)
    obs = ProjectiveObservable.validated(range(len(blocks)), tuple(blocks), tol)
    rho = _random_probe(rng, dim, cfg.include_singular, tol)
    direct, gap = corollary1_check(rho, obs, tol)
    rho_l = lueders_state(rho, obs, tol)
    support_ok = support_contained(rho, rho_l, tol)
    if direct.is_finite and support_ok:
        residual = abs(direct.value - gap)
        passed = residual <= tol.identity
    else:
        residual, passed = INFINITE_MISMATCH, False
    return TrialRecord(
        identity=cfg.identity,
        dim=dim,
        trial=trial,
        seed=seed,
        residual=residual,
        min_nonzero_eig=_min_nonzero_eig(rho_l, tol),
        leakage=support_leakage(rho, rho_l, tol),
        passed=passed,
    )


def _trial_corollary2(cfg: VerifyConfig, dim: int, trial: int, seed: int) -> TrialRecord:
    rng = np.random.default_rng(seed)
    tol = cfg.tol
    blocks = _blocks_fixture(rng, dim, tol)
    pair = random_refinement(blocks, _sub_seed(rng), tol, rank_one=bool(rng.random() < 0.25))
    rho = _random_probe(rng, dim, cfg.include_singular, tol)
    report, composition = corollary2_check(rho, pair, tol)
    if report.all_finite:
        residual = max(report.residual, composition)
        passed = residual <= tol.identity
    else:
        residual, passed = INFINITE_MISMATCH, False
    return TrialRecord(
        identity=cfg.identity,
        dim=dim,
        trial=trial,
        seed=seed,
        residual=residual,
        min_nonzero_eig=None,
        leakage=None,
        passed=passed,
    )


def _trial_corollary3(cfg: VerifyConfig, dim: int, trial: int, seed: int) -> TrialRecord:
    rng = np.random.default_rng(seed)
    tol = cfg.tol
    k = int(rng.integers(2, dim + 1))
    p = rng.dirichlet(np.ones(k)) + 0.05
    w = rng.dirichlet(np.ones(k)) + 0.05
    if _infinite_slot(cfg, trial):
        # Kill the weight under the largest p entry: both the classical
        # and the embedded quantum route must report +inf.
        w[int(np.argmax(p))] = 0.0
    elif k >= 3 and rng.random() < 0.3:
        p[int(rng.integers(0, k))] = 0.0
    p /= p.sum()
    w /= w.sum()
    basis = haar_unitary(dim, _sub_seed(rng))[:, :k]
    classical, quantum = classical_embedding_check(
        ProbabilityVector.validated(p, tol), ProbabilityVector.validated(w, tol), basis, tol
    )
    if classical.is_finite and quantum.is_finite:
        residual: float | str = abs(classical.value - quantum.value)
        passed = residual <= tol.identity
    else:
        residual, passed = _verdict(classical.is_finite, quantum.is_finite, None, tol)
    return TrialRecord(
        identity=cfg.identity,
        dim=dim,
        trial=trial,
        seed=seed,
        residual=residual,
        min_nonzero_eig=None,
        leakage=None,
        passed=passed,
    )


def _trial_theorem2(cfg: VerifyConfig, dim: int, trial: int, seed: int) -> TrialRecord:
    rng = np.random.default_rng(seed)
    tol = cfg.tol
    degenerate = trial % 4 == 1
    if degenerate:
        lam = rng.dirichlet(np.ones(dim)) + 0.05
        lam[1] = lam[0]
        if dim >= 4:
            lam[3] = lam[2]
        if cfg.include_singular and rng.random() < 0.3 and dim >= 3:
            lam[-1] = 0.0
        lam /= lam.sum()
        u = haar_unitary(dim, _sub_seed(rng))
        sigma = validate_density((u * lam) @ u.conj().T, tol)
    else:
        rank = int(rng.integers(max(1, dim // 2), dim + 1)) if cfg.include_singular else dim
        sigma = random_density(GenSpec(dim=dim, rank=rank, seed=_sub_seed(rng)), tol)
    supp = support_projector(sigma, tol)
    rho = random_state_in_support(supp, int(rng.integers(1, supp.rank + 1)), _sub_seed(rng), tol)
    report, _middle = theorem2_check(rho, sigma, tol)
    if report.all_finite:
        residual: float | str = report.residual
        passed = residual <= tol.identity
    else:
        residual, passed = INFINITE_MISMATCH, False
    return TrialRecord(
        identity=cfg.identity,
        dim=dim,
        trial=trial,
        seed=seed,
        residual=residual,
        min_nonzero_eig=_min_nonzero_eig(sigma, tol),
        leakage=support_leakage(rho, sigma, tol),
        passed=passed,
    )


_TRIALS = {
    "lemma1": _trial_lemma1,
    "eq3a": _trial_eq3a,
    "theorem1": _trial_theorem1,
    "corollary1": _trial_corollary1,
    "corollary2": _trial_corollary2,
    "corollary3": _trial_corollary3,
    "theorem2": _trial_theorem2,
}


def run_campaign(config: VerifyConfig, threads: int = 1) -> CampaignResult:
    """Run every trial of a campaign, optionally on a thread pool.

    The records are a pure function of ``config``: per-trial seeds are
    derived from ``(config.seed, dim, trial)``, and the record order is
    by ``(dim, trial)``, so thread count affects wall time only.
    """
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    trial_fn = _TRIALS[config.identity]
    jobs = [(dim, t) for dim in sorted(config.dims) for t in range(config.trials)]

    def run_one(job: tuple[int, int]) -> TrialRecord:
        dim, t = job
        return trial_fn(config, dim, t, derive_seed(config.seed, dim, t))

    start = time.perf_counter()
    if threads == 1:
        records = [run_one(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(run_one, jobs))
    wall = time.perf_counter() - start

    failures = sum(1 for r in records if not r.passed)
    float_residuals = [r.residual for r in records if isinstance(r.residual, float)]
    return CampaignResult(
        config=config,
        records=tuple(records),
        failures=failures,
        max_residual=max(float_residuals) if float_residuals else None,
        wall_time=wall,
    )


def report_document(result: CampaignResult) -> dict:
    """The report as a JSON-ready dict (no wall time: reports must be
    byte-identical across runs and thread counts)."""
    cfg = result.config
    return {
        "schema_version": 1,
        "identity": cfg.identity,
        "config": {
            "dims": list(cfg.dims),
            "trials": cfg.trials,
            "seed": cfg.seed,
            "include_singular": cfg.include_singular,
            "include_infinite": cfg.include_infinite,
            "tolerances": {name: getattr(cfg.tol, name) for name in cfg.tol.__dataclass_fields__},
        },
        "records": [
            {
                "identity": r.identity,
                "dim": r.dim,
                "trial": r.trial,
                "seed": r.seed,
                "residual": r.residual,
                "min_nonzero_eig": r.min_nonzero_eig,
                "leakage": r.leakage,
                "passed": r.passed,
            }
            for r in result.records
        ],
        "summary": {
            "trials": len(result.records),
            "failures": result.failures,
            "max_residual": result.max_residual,
        },
    }


def write_report(result: CampaignResult, path: str | Path) -> None:
    """Write the deterministic JSON report."""
    Path(path).write_text(json.dumps(report_document(result), indent=2) + "\n")
