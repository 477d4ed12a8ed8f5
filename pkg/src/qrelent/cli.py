"""Command-line front end: compute, verify, breakdown."""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .errors import QrelentError
from .linop import DEFAULT_TOL, Projector, Tolerances, support_projector, validate_density
from .entropy import ExtendedReal, quantum_relative_entropy
from .mixing import decompose_by_projectors, theorem1_breakdown
from .campaign import IDENTITIES, VerifyConfig, run_campaign, write_report
from . import matio

LN2 = math.log(2.0)


def _fmt(x: ExtendedReal | float | None, bits: bool) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, ExtendedReal):
        if not x.is_finite:
            return "inf"
        x = x.value
    return f"{x / LN2 if bits else x:.12g}"


def _unit(bits: bool) -> str:
    return "bits" if bits else "nats"


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise QrelentError(f"{what} must be a comma-separated list of integers, got {text!r}")
    if not values:
        raise QrelentError(f"{what} must not be empty")
    return values


def _tolerances(args) -> Tolerances:
    if args.tol is None:
        return DEFAULT_TOL
    if args.tol <= 0:
        raise QrelentError(f"--tol must be positive, got {args.tol}")
    return DEFAULT_TOL.replace(identity=args.tol)


def cmd_compute(args) -> int:
    tol = _tolerances(args)
    rho = validate_density(matio.load_matrix(args.rho), tol)
    sigma = validate_density(matio.load_matrix(args.sigma), tol)
    p_rho = support_projector(rho, tol)
    p_sigma = support_projector(sigma, tol)
    value = quantum_relative_entropy(rho, sigma, tol)
    print(f"rho:    dim {rho.dim}, support rank {p_rho.rank}")
    print(f"sigma:  dim {sigma.dim}, support rank {p_sigma.rank}")
    print(f"support(rho) <= support(sigma): {'yes' if value.is_finite else 'no'}")
    print(f"S(rho||sigma) = {_fmt(value, args.bits)} {_unit(args.bits)}")
    return 0


def _basis_blocks(sizes: tuple[int, ...], dim: int) -> list[Projector]:
    if sum(sizes) != dim:
        raise QrelentError(f"--blocks {','.join(map(str, sizes))} must sum to the dimension {dim}")
    blocks = []
    start = 0
    for s in sizes:
        if s < 1:
            raise QrelentError("block sizes must be positive")
        m = np.zeros((dim, dim), dtype=complex)
        for i in range(start, start + s):
            m[i, i] = 1.0
        blocks.append(Projector.validated(m))
        start += s
    return blocks


def cmd_breakdown(args) -> int:
    tol = _tolerances(args)
    rho = validate_density(matio.load_matrix(args.rho), tol)
    sigma = validate_density(matio.load_matrix(args.sigma), tol)
    if args.blocks is not None:
        blocks = _basis_blocks(_parse_int_list(args.blocks, "--blocks"), sigma.dim)
        print(f"blocks: {args.blocks} (computational basis)")
    else:
        blocks = [Projector.validated(m, tol) for m in matio.load_projectors(args.blocks_file)]
        print(f"blocks: {len(blocks)} projectors from {args.blocks_file}")
    d = decompose_by_projectors(sigma, blocks, tol)
    bd = theorem1_breakdown(rho, d, tol)

    bits = args.bits
    print(f"units: {_unit(bits)}")
    print("  k    w_k                 p_k")
    for k, (w, p) in enumerate(zip(d.weights.probs.tolist(), bd.p.probs.tolist())):
        print(f"  {k:<4d} {w:<19.12g} {p:<19.12g}")
    print(f"S(pinched rho)              = {_fmt(bd.s_pinched, bits)}")
    print(f"S(rho)                      = {_fmt(bd.s_rho, bits)}")
    print(f"H(p||w)                     = {_fmt(bd.h_rel, bits)}")
    print(f"sum_k p_k S(rho_k||sigma_k) = {_fmt(bd.avg_rel, bits)}")
    print(f"rhs total                   = {_fmt(bd.total_rhs, bits)}")
    print(f"S(rho||sigma), direct       = {_fmt(bd.total_lhs, bits)}")
    print(f"residual |lhs - rhs|        = {_fmt(bd.residual, False)}{'' if bd.residual is None else ' nats'}")
    return 0


def cmd_verify(args) -> int:
    config = VerifyConfig(
        identity=args.identity,
        dims=_parse_int_list(args.dims, "--dims"),
        trials=args.trials,
        seed=args.seed,
        tol=_tolerances(args),
        include_singular=args.include_singular,
        include_infinite=args.include_infinite,
    )
    result = run_campaign(config, threads=args.threads)
    out = args.out if args.out is not None else f"verify_{config.identity}.json"
    write_report(result, out)
    consistent = sum(1 for r in result.records if r.residual == "infinite-consistent")
    mismatched = sum(1 for r in result.records if r.residual == "infinite-mismatch")
    print(f"identity          {config.identity}")
    print(f"dims              {', '.join(str(d) for d in config.dims)}")
    print(f"trials per dim    {config.trials}")
    print(f"records           {len(result.records)}")
    print(f"failures          {result.failures}")
    print(f"max residual      {_fmt(result.max_residual, False)}")
    print(f"infinite trials   {consistent} consistent, {mismatched} mismatched")
    print(f"wall time         {result.wall_time:.2f} s")
    print(f"report            {out}")
    return 0 if result.failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrelent",
        description="Quantum relative entropy with rigorous support handling, "
        "plus randomized verification of its exact decomposition identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="compute S(rho||sigma) from two matrix files")
    p_compute.add_argument("rho", help="matrix file for rho")
    p_compute.add_argument("sigma", help="matrix file for sigma")
    p_compute.add_argument("--tol", type=float, default=None, help="identity-check tolerance override")
    p_compute.add_argument("--bits", action="store_true", help="report in bits instead of nats")
    p_compute.set_defaults(fn=cmd_compute)

    p_verify = sub.add_parser("verify", help="run a randomized verification campaign")
    p_verify.add_argument("identity", choices=IDENTITIES, help="which identity to verify")
    p_verify.add_argument("--dims", default="2,3,4,8,16", help="comma-separated dimensions")
    p_verify.add_argument("--trials", type=int, default=200, help="trials per dimension")
    p_verify.add_argument("--seed", type=int, default=0, help="master seed")
    p_verify.add_argument("--tol", type=float, default=None, help="identity-check tolerance override")
    p_verify.add_argument(
        "--include-singular",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="include rank-deficient states",
    )
    p_verify.add_argument(
        "--include-infinite",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="include support-violating trials that must agree on +inf",
    )
    p_verify.add_argument("--threads", type=int, default=1, help="worker threads (does not affect the report)")
    p_verify.add_argument("--out", default=None, help="report path (default: verify_<identity>.json)")
    p_verify.set_defaults(fn=cmd_verify)

    p_break = sub.add_parser(
        "breakdown", help="term-by-term mixing breakdown of S(rho||sigma) for a block decomposition"
    )
    p_break.add_argument("rho", help="matrix file for rho")
    p_break.add_argument("sigma", help="matrix file for sigma")
    group = p_break.add_mutually_exclusive_group(required=True)
    group.add_argument("--blocks", default=None, help="comma-separated computational-basis block sizes")
    group.add_argument("--blocks-file", default=None, help="projector file with the block family")
    p_break.add_argument("--tol", type=float, default=None, help="identity-check tolerance override")
    p_break.add_argument("--bits", action="store_true", help="report in bits instead of nats")
    p_break.set_defaults(fn=cmd_breakdown)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except QrelentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
