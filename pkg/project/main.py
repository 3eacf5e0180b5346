import sys
import os

# Ensure the repository root is on sys.path so "project" can be imported
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import logging
import argparse
import time
from typing import List, Optional

from project.helpers.frobenius import EvenDimension, classify, odd_dimension_shortcut
from project.helpers.outcome import Success
from project.libs.algebra import StructureTensor, check_axioms
from project.libs.linalg import Tolerance, default_tolerance
from project.reporting.config import get_classifier_config
from project.reporting.documents import (
    DocumentError,
    ReportDocument,
    TensorDocument,
    report_for_axioms,
    report_for_outcome,
)
from project.reporting.fixtures import KINDS, FixtureError, generate, validate_seed
from project.reporting.renderer import render_report

EXIT_OK = 0
EXIT_NOT_DIVISION = 1
EXIT_INPUT_ERROR = 2
EXIT_PRECONDITION = 3


def _tolerance_arg(value: str) -> float:
    try:
        tol = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tolerance {value!r}")
    if not 0.0 < tol < 1.0:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1), got {value}")
    return tol


def _seed_arg(value: str) -> int:
    try:
        return validate_seed(int(value, 0))
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer in [0, 2^64), got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frobenius",
        description="Classify real associative division algebras given by structure constants",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("classify", "Classify a tensor as R, C or H, or print a failure witness"),
        ("verify", "Check unity and associativity only"),
        ("shortcut", "Odd-dimension shortcut: R or a zero divisor"),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("path", help="TensorDocument JSON file")
        sub.add_argument("--tol", type=_tolerance_arg, default=None, help="Absolute and relative tolerance (default 1e-9)")
        sub.add_argument("--json", action="store_true", help="Print the machine-readable report")

    generate_parser = subparsers.add_parser("generate", help="Write a fixture tensor")
    generate_parser.add_argument("kind", choices=sorted(KINDS), help="Fixture kind")
    generate_parser.add_argument("--seed", type=_seed_arg, default=0, help="64-bit seed for twisted kinds")
    generate_parser.add_argument("--out", required=False, help="Output path (default: standard output)")
    generate_parser.add_argument("--dim", type=int, default=None, help="Dimension for rn-componentwise")
    return parser


def _load_tensor(path: str) -> StructureTensor:
    return TensorDocument.load(path).to_tensor()


def _emit(report: ReportDocument, as_json: bool) -> None:
    sys.stdout.write(report.dumps() if as_json else render_report(report))


def _run_generate(args) -> int:
    try:
        document = generate(args.kind, args.seed, args.dim)
    except (FixtureError, ValueError) as e:
        logging.error(f"Could not generate {args.kind}: {e}")
        return EXIT_INPUT_ERROR
    text = document.dumps()
    if args.out:
        os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        logging.info(f"Wrote {args.kind} fixture to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _run_on_tensor(args, tol: Tolerance) -> int:
    try:
        T = _load_tensor(args.path)
    except (DocumentError, OSError) as e:
        logging.error(f"Could not read {args.path}: {e}")
        return EXIT_INPUT_ERROR

    start = time.perf_counter()
    if args.command == "verify":
        axioms = check_axioms(T, tol)
        report = report_for_axioms(T, axioms, tol, timing_ms=(time.perf_counter() - start) * 1000.0)
        _emit(report, args.json)
        return EXIT_OK if report.succeeded else EXIT_NOT_DIVISION

    if args.command == "shortcut":
        try:
            outcome = odd_dimension_shortcut(T, tol)
        except EvenDimension as e:
            logging.error(str(e))
            return EXIT_PRECONDITION
        axioms = None
    else:
        axioms = check_axioms(T, tol)
        outcome = classify(T, tol)

    elapsed = (time.perf_counter() - start) * 1000.0
    _emit(report_for_outcome(args.command, T, outcome, tol, axioms=axioms, timing_ms=elapsed), args.json)
    return EXIT_OK if isinstance(outcome, Success) else EXIT_NOT_DIVISION


def main(argv: Optional[List[str]] = None) -> int:
    cfg = get_classifier_config()
    logging.basicConfig(level=getattr(logging, cfg.LOG_LEVEL), format="%(asctime)s - %(levelname)s - %(message)s")

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse reports usage errors with status 2
        return int(e.code) if isinstance(e.code, int) else EXIT_INPUT_ERROR

    if args.command == "generate":
        return _run_generate(args)

    tol = Tolerance(eps=args.tol, rel=args.tol) if args.tol is not None else default_tolerance()
    return _run_on_tensor(args, tol)


if __name__ == "__main__":
    sys.exit(main())
