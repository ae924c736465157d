"""Command-line interface.

Subcommands:
  dist    exact per-class peak distribution (JSON or CSV)
  sample  seeded sampling experiment over a class (JSON)
  mgf     exact log-mgf split against the normal-limit prediction (JSON)
  verify  run the built-in verification checks

Cycle types are written as whitespace- or comma-separated ``part^mult``
tokens ("2^3 1^2"), a bare part meaning multiplicity one.  The
shorthands ``identity:n`` and ``cycle:n`` expand to 1^n and n^1.

Environment:
  PEAKLAB_MAX_N    overrides the exact-distribution size guard
  PEAKLAB_THREADS  validated for forward compatibility; evaluation is
                   sequential regardless
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import asdict
from typing import Optional, Sequence

from .asymptotics import prediction_residual
from .combinatorics import CycleType
from .errors import (
    CycleTypeParseError,
    InternalConsistencyError,
    PrecisionError,
    SizeLimitError,
)
from .peaks import class_peak_distribution, peak_moments
from .sampling import GENERATOR_ID, SeedSpec, run_experiment
from .verify import CHECKS, SUITES, run_checks

_TOKEN = re.compile(r"[^,\s]+")


def _parse_positive_int(text: str, position: int, what: str) -> int:
    if not text.isdigit():
        raise CycleTypeParseError(
            f"expected a positive integer for {what}, got {text!r}", position
        )
    value = int(text)
    if value < 1:
        raise CycleTypeParseError(f"{what} must be >= 1, got {value}", position)
    return value


def parse_cycle_type(text: str, expected_n: Optional[int] = None) -> CycleType:
    """Parse ``part^mult`` tokens into a CycleType.

    Repeated parts accumulate ("2 2" is 2^2).  ``expected_n`` cross-checks
    the total number of points.
    """
    tokens = [(m.group(0), m.start()) for m in _TOKEN.finditer(text)]
    if not tokens:
        raise CycleTypeParseError("empty cycle type", 0)
    pairs: list[tuple[int, int]] = []
    for token, start in tokens:
        if ":" in token:
            head, _, rest = token.partition(":")
            if head == "derangement":
                raise CycleTypeParseError(
                    "derangements form a union of classes; "
                    "invoke each fixed-point-free cycle type separately",
                    start,
                )
            if head not in ("identity", "cycle"):
                raise CycleTypeParseError(f"unknown shorthand {head!r}", start)
            if len(tokens) != 1:
                raise CycleTypeParseError(
                    f"{head}:n must be the entire cycle type", start
                )
            value = _parse_positive_int(rest, start + len(head) + 1, "n")
            pairs.append((1, value) if head == "identity" else (value, 1))
            continue
        part_text, caret, mult_text = token.partition("^")
        part = _parse_positive_int(part_text, start, "cycle size")
        if caret:
            mult = _parse_positive_int(
                mult_text, start + len(part_text) + 1, "multiplicity"
            )
        else:
            mult = 1
        pairs.append((part, mult))
    lam = CycleType(pairs)
    if expected_n is not None and lam.n != expected_n:
        raise CycleTypeParseError(
            f"cycle type covers {lam.n} points, expected {expected_n}"
        )
    return lam


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _threads_from_env() -> int:
    raw = os.environ.get("PEAKLAB_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ValueError(f"PEAKLAB_THREADS must be a positive integer, got {raw!r}")
    return value


def _cmd_dist(args: argparse.Namespace) -> int:
    lam = parse_cycle_type(args.cycle_type, args.n)
    dist = class_peak_distribution(lam)
    if args.format == "csv":
        kmax = (lam.n - 1) // 2
        rows = ["k,count"] + [f"{k},{dist.count(k)}" for k in range(kmax + 1)]
        sys.stdout.write("\n".join(rows) + "\n")
        return 0
    payload = {
        "n": lam.n,
        "cycle_type": str(lam),
        "class_size": str(dist.total),
        "counts": {str(k): str(v) for k, v in dist.counts.items()},
        "mean": str(dist.mean()),
        "variance": str(dist.variance()),
    }
    sys.stdout.write(_dumps(payload))
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    lam = parse_cycle_type(args.cycle_type, args.n)
    seed = SeedSpec(seed=args.seed, stream=args.stream)
    stats = run_experiment(lam, args.draws, seed, validate=args.validate)
    ref_mean, ref_variance = peak_moments(lam.n)
    payload = {
        "n": lam.n,
        "cycle_type": str(lam),
        "draws": stats.count,
        "seed": args.seed,
        "stream": args.stream,
        "generator": GENERATOR_ID,
        "histogram": {str(k): v for k, v in stats.histogram.items()},
        "mean": stats.mean,
        "variance": stats.variance,
        "ref_mean": str(ref_mean),
        "ref_variance": str(ref_variance),
    }
    sys.stdout.write(_dumps(payload))
    return 0


def _cmd_mgf(args: argparse.Namespace) -> int:
    lam = parse_cycle_type(args.cycle_type, args.n)
    breakdown = prediction_residual(lam, args.scale, prec=args.prec)
    sys.stdout.write(_dumps(asdict(breakdown)))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    names = tuple(args.check) if args.check else SUITES[args.suite]
    failures = 0
    for result in run_checks(names):
        status = "ok" if result.passed else "FAIL"
        line = (
            f"{result.name}: {status} "
            f"measured={result.measured:.6g} bound={result.bound:.6g}"
        )
        if result.detail:
            line += f" ({result.detail})"
        print(line, flush=True)
        if not result.passed:
            failures += 1
    if failures:
        print(f"{failures} check(s) failed", file=sys.stderr)
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peaklab",
        description="Exact and asymptotic peak statistics of permutation "
        "conjugacy classes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="exact per-class peak distribution")
    p_dist.add_argument("cycle_type", help='cycle type, e.g. "2^3 1^2"')
    p_dist.add_argument("--n", type=int, default=None, help="expected point count")
    p_dist.add_argument(
        "--format", choices=("json", "csv"), default="json", help="output format"
    )
    p_dist.set_defaults(func=_cmd_dist)

    p_sample = sub.add_parser("sample", help="seeded sampling experiment")
    p_sample.add_argument("cycle_type")
    p_sample.add_argument("--n", type=int, default=None)
    p_sample.add_argument("--draws", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.add_argument("--stream", type=int, default=0)
    p_sample.add_argument(
        "--validate",
        action="store_true",
        help="re-derive the cycle type of every draw",
    )
    p_sample.set_defaults(func=_cmd_sample)

    p_mgf = sub.add_parser("mgf", help="log-mgf vs the normal-limit prediction")
    p_mgf.add_argument("cycle_type")
    p_mgf.add_argument("--n", type=int, default=None)
    p_mgf.add_argument("--scale", type=float, required=True, help="s > 0")
    p_mgf.add_argument("--prec", type=int, default=300, help="working precision, bits")
    p_mgf.set_defaults(func=_cmd_mgf)

    p_verify = sub.add_parser("verify", help="run verification checks")
    p_verify.add_argument(
        "--suite", choices=tuple(SUITES), default="all", help="named check suite"
    )
    p_verify.add_argument(
        "--check",
        action="append",
        choices=tuple(CHECKS),
        help="individual check (repeatable; overrides --suite)",
    )
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        _threads_from_env()
        parser = _build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except CycleTypeParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InternalConsistencyError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
