"""Command line entry point.

Exit codes: 0 success, 2 scenario invalid (violations reported), 1 I/O,
parse or internal error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import causal, harness, render
from .errors import EPRReductionError
from .scenario_io import SCHEMA_VERSION, load_scenario
from .spacetime import Velocity
from .spin import Axis

log = logging.getLogger("epr_reduction")

EXIT_OK, EXIT_ERROR, EXIT_INVALID = 0, 1, 2


def _triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number in {text!r}") from None


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epr-reduction",
        description="Sequential spin tests on an entangled pair in Minkowski spacetime.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="scenario JSON file")
        p.add_argument("--output", choices=("json", "table"), default="table")
        return p

    add("validate", "check physical admissibility")
    add("orderings", "list causally consistent test orders")
    p = add("boost", "coordinates and test order in a moving frame")
    p.add_argument("--frame", type=_triple, required=True, metavar="VX,VY,VZ")
    p = add("sweep", "singlet correlation against rotation angle")
    p.add_argument("--axis", type=_triple, required=True, metavar="NX,NY,NZ")
    p.add_argument("--steps", type=int, default=13)
    p = add("run", "validate, compute distributions and answer queries")
    p.add_argument("--mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--frame", type=_triple, default=None, metavar="VX,VY,VZ")
    return parser


def _emit(data: dict, table: str, output: str) -> None:
    sys.stdout.write(harness.to_json(data) if output == "json" else table)


def _invalid(s, output) -> int:
    validation = harness.validation_section(s)
    _emit({"schema": SCHEMA_VERSION, "validation": validation}, render.validation_table(validation), output)
    return EXIT_INVALID


def _dispatch(args) -> int:
    s = load_scenario(args.file)
    if args.command == "validate":
        validation = harness.validation_section(s)
        _emit({"schema": SCHEMA_VERSION, "validation": validation}, render.validation_table(validation), args.output)
        return EXIT_OK if validation["ok"] else EXIT_INVALID

    if args.command == "run":
        frame = Velocity(*args.frame) if args.frame else None
        cfg = harness.RunConfig(
            mode="montecarlo" if args.mode == "mc" else "exact",
            samples=args.samples,
            seed=args.seed,
            frame=frame,
            output=args.output,
        )
        report = harness.run(s, cfg)
        data = report.to_dict()
        _emit(data, render.report_table(data), args.output)
        return report.exit_code

    if causal.validate(s):
        return _invalid(s, args.output)

    if args.command == "orderings":
        orders = causal.linear_extensions(s)
        data = {"schema": SCHEMA_VERSION, "orderings": [list(o) for o in orders], "truncated": orders.truncated}
        _emit(data, render.orderings_table(data["orderings"], orders.truncated), args.output)
    elif args.command == "boost":
        frame = harness.frame_report(s, Velocity(*args.frame))
        _emit({"schema": SCHEMA_VERSION, "frame": frame}, render.frame_table(frame), args.output)
    elif args.command == "sweep":
        sweep = harness.correlation_sweep(s, Axis(*args.axis), args.steps)
        for w in sweep["warnings"]:
            log.warning("%s: initial state is not the singlet; reference line omitted", w)
        _emit(sweep, render.sweep_table(sweep), args.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for invalid scenarios
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return _dispatch(args)
    except OSError as exc:
        log.error("cannot read %s: %s", args.file, exc)
    except (EPRReductionError, ValueError) as exc:
        log.error("%s", exc)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
