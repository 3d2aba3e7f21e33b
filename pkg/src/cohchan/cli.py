"""Command-line interface: channel ingestion, coherence computation,
parameter sweeps, verification suites, and canonical example channels.

Exit codes: 0 success, 1 property failure, 2 malformed input, 3 CPTP
validation failure, 4 parameter outside the measure's regime, 5 structural
precondition failure (e.g. the pure-Choi formula on a mixed Choi state).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from cohchan.channels import ChannelValidationError, validate_cptp
from cohchan.documents import (
    DocumentFormatError,
    channel_from_document,
    channel_to_document,
    result_document,
)
from cohchan.entropies import EntropyParams, ParameterDomainError
from cohchan.monotones import (
    MixedChoiStateError,
    NoPureDecompositionError,
    RoofSearchConfig,
    UnsupportedDimensionError,
    sandwiched_channel_coherence_convex_roof,
    sandwiched_channel_coherence_pure,
    urs_channel_coherence,
)
from cohchan.properties import SUITE_NAMES, run_verification
from cohchan.qubit_examples import (
    amplitude_damping_channel,
    dephasing_channel,
    hadamard_channel,
    identity_channel,
    sandwiched_unitary_closed_form,
    sandwiched_upper_bound,
    unitary_channel,
    urs_unitary_closed_form,
    urs_upper_bound,
)

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_MALFORMED = 2
EXIT_CPTP = 3
EXIT_REGIME = 4
EXIT_PRECONDITION = 5

#: CPTP validation tolerance applied to every ingested channel document.
INGEST_CPTP_TOL = 1e-8

SWEEP_COLUMNS = ("param", "param_value", "closed_form", "pipeline", "upper_bound", "abs_diff")


def _emit(payload: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(payload)
            if not payload.endswith("\n"):
                handle.write("\n")
    else:
        print(payload)


def _load_channel(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            doc = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentFormatError(f"cannot read channel document {path}: {exc}") from exc
    channel = channel_from_document(doc)
    report = validate_cptp(channel, tol=INGEST_CPTP_TOL)
    if not report.passed:
        raise ChannelValidationError(
            f"channel fails CPTP validation: min Choi eigenvalue "
            f"{report.min_choi_eigenvalue:.3e}, trace-preservation error "
            f"{report.trace_preservation_error:.3e}"
        )
    return channel


def cmd_compute(args) -> int:
    channel = _load_channel(args.channel)
    if args.measure == "urs":
        if args.r is None or args.s is None:
            raise ParameterDomainError("--measure urs needs both --r and --s")
        report = urs_channel_coherence(channel, EntropyParams(r=args.r, s=args.s))
    elif args.measure == "sandwiched-pure":
        if args.r is None:
            raise ParameterDomainError("--measure sandwiched-pure needs --r")
        report = sandwiched_channel_coherence_pure(channel, args.r)
    else:
        if args.r is None:
            raise ParameterDomainError("--measure sandwiched-roof needs --r")
        report = sandwiched_channel_coherence_convex_roof(
            channel, args.r, RoofSearchConfig(seed=args.seed)
        )
    timestamp = datetime.now(timezone.utc).isoformat()
    doc = result_document(report, seed=args.seed, timestamp=timestamp)
    _emit(json.dumps(doc, indent=2), args.output)
    return EXIT_OK


def _sweep_point(args, value: float) -> dict:
    gamma, r, s = args.gamma, args.r, args.s
    if args.param == "gamma":
        gamma = value
    elif args.param == "r":
        r = value
    else:
        s = value
    channel = unitary_channel(gamma)
    if args.measure == "urs":
        if r is None or s is None:
            raise ParameterDomainError("urs sweeps need --r and --s (or sweep them)")
        closed = urs_unitary_closed_form(gamma, r, s)
        pipeline = urs_channel_coherence(channel, EntropyParams(r=r, s=s)).value
        bound = urs_upper_bound(r, s)
    else:
        if r is None:
            raise ParameterDomainError("sandwiched sweeps need --r (or sweep it)")
        closed = sandwiched_unitary_closed_form(gamma, r)
        if args.measure == "sandwiched-pure":
            pipeline = sandwiched_channel_coherence_pure(channel, r).value
        else:
            pipeline = sandwiched_channel_coherence_convex_roof(
                channel, r, RoofSearchConfig(seed=args.seed)
            ).value
        bound = sandwiched_upper_bound()
    return {
        "param": args.param,
        "param_value": value,
        "closed_form": closed,
        "pipeline": pipeline,
        "upper_bound": bound,
        "abs_diff": abs(closed - pipeline),
    }


def cmd_sweep(args) -> int:
    grid = np.linspace(args.from_, args.to, args.steps)
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(lambda v: _sweep_point(args, float(v)), grid))
    else:
        rows = [_sweep_point(args, float(v)) for v in grid]
    if args.format == "json":
        _emit(json.dumps(rows, indent=2), args.output)
    else:
        lines = [",".join(SWEEP_COLUMNS)]
        for row in rows:
            lines.append(
                ",".join(
                    row["param"] if column == "param" else f"{row[column]:.12g}"
                    for column in SWEEP_COLUMNS
                )
            )
        _emit("\n".join(lines), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = list(SUITE_NAMES) if args.suite == "all" else [args.suite]
    reports = run_verification(
        suites,
        seed=args.seed,
        samples=args.samples,
        incoherence_tol=args.incoherence_tol,
    )
    passed = all(report.passed for report in reports)
    payload = {
        "seed": args.seed,
        "passed": passed,
        "suites": [report.to_dict() for report in reports],
    }
    _emit(json.dumps(payload, indent=2), args.output)
    return EXIT_OK if passed else EXIT_PROPERTY_FAILURE


def cmd_example(args) -> int:
    if args.name == "hadamard":
        channel = hadamard_channel()
    elif args.name == "identity":
        channel = identity_channel()
    elif args.name == "dephasing":
        channel = dephasing_channel()
    elif args.name == "unitary":
        channel = unitary_channel(
            gamma=args.gamma, alpha=args.alpha, beta=args.beta, delta=args.delta
        )
    else:  # amplitude-damping
        channel = amplitude_damping_channel(args.gamma)
    _emit(json.dumps(channel_to_document(channel), indent=2), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohchan",
        description="Coherence monotones of quantum channels via Choi states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="coherence of a channel document")
    compute.add_argument("--channel", required=True, help="path to a channel JSON document")
    compute.add_argument(
        "--measure",
        required=True,
        choices=["urs", "sandwiched-pure", "sandwiched-roof"],
    )
    compute.add_argument("--r", type=float, default=None)
    compute.add_argument("--s", type=float, default=None)
    compute.add_argument("--seed", type=int, default=0)
    compute.add_argument("--output", default=None)
    compute.set_defaults(func=cmd_compute)

    sweep = sub.add_parser("sweep", help="grid sweep over gamma, r, or s")
    sweep.add_argument("--param", required=True, choices=["gamma", "r", "s"])
    sweep.add_argument("--from", dest="from_", type=float, required=True)
    sweep.add_argument("--to", type=float, required=True)
    sweep.add_argument("--steps", type=int, required=True)
    sweep.add_argument(
        "--measure",
        default="urs",
        choices=["urs", "sandwiched-pure", "sandwiched-roof"],
    )
    sweep.add_argument("--r", type=float, default=None)
    sweep.add_argument("--s", type=float, default=None)
    sweep.add_argument(
        "--gamma",
        type=float,
        default=math.pi / 2.0,
        help="fixed unitary angle for r/s sweeps (default pi/2)",
    )
    sweep.add_argument("--format", default="csv", choices=["csv", "json"])
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--output", default=None)
    sweep.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="run sampled property suites")
    verify.add_argument("--suite", default="all", choices=["all", *SUITE_NAMES])
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument(
        "--samples",
        type=int,
        default=None,
        help="override the suite's default sample count",
    )
    verify.add_argument("--incoherence-tol", type=float, default=1e-9)
    verify.add_argument("--output", default=None)
    verify.set_defaults(func=cmd_verify)

    example = sub.add_parser("example", help="write a canonical channel document")
    example.add_argument(
        "name",
        choices=["hadamard", "dephasing", "identity", "unitary", "amplitude-damping"],
    )
    example.add_argument("--gamma", type=float, default=0.0)
    example.add_argument("--alpha", type=float, default=0.0)
    example.add_argument("--beta", type=float, default=0.0)
    example.add_argument("--delta", type=float, default=0.0)
    example.add_argument("--output", default=None)
    example.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ChannelValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CPTP
    except ParameterDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (MixedChoiStateError, NoPureDecompositionError, UnsupportedDimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
