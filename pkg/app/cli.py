"""
Command-line front end.

    graphic validate PATH [--format json|text]
    graphic sweep PATH [--format json|text]
    graphic slice PATH --angle T [--level Y] [--format json|text]
    graphic plot PATH --out FILE.svg [--angle T]
    graphic examples --list | --emit NAME|all DIR

Exit codes: 0 ok, 1 I/O or parse failure, 2 validation or genericity failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from models.catalog import get_example_factories
from models.errors import ChainError, GraphicError, SchemaError
from models.graphic import Graphic
from services import report_service
from services.plot_service import save_plot
from services.slice_service import SliceService
from services.sweep_service import SweepService
from services.validation_service import validate
from utils.graphic_loader import load_graphic, save_graphic

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2


class ValidationFailed(Exception):
    def __init__(self, report):
        super().__init__("graphic failed validation")
        self.report = report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphic", description="Sweep analysis of stable-map graphics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check the graphic axioms")
    p_validate.add_argument("path")
    p_validate.add_argument("--format", choices=("json", "text"), default="text")

    p_sweep = sub.add_parser("sweep", help="event schedule, genus trajectory and stable genus bound")
    p_sweep.add_argument("path")
    p_sweep.add_argument("--format", choices=("json", "text"), default="text")

    p_slice = sub.add_parser("slice", help="slice census at one level, or the whole profile")
    p_slice.add_argument("path")
    p_slice.add_argument("--angle", type=float, required=True)
    p_slice.add_argument("--level", type=float, default=None)
    p_slice.add_argument("--format", choices=("json", "text"), default="text")

    p_plot = sub.add_parser("plot", help="write an SVG drawing")
    p_plot.add_argument("path")
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--angle", type=float, default=None)

    p_examples = sub.add_parser("examples", help="list or write the shipped example graphics")
    group = p_examples.add_mutually_exclusive_group(required=True)
    group.add_argument("--list", action="store_true")
    group.add_argument("--emit", nargs=2, metavar=("NAME", "DIR"))
    return parser


def _load_valid(path: str) -> Graphic:
    graphic = load_graphic(path)
    report = validate(graphic)
    if not report.passed:
        raise ValidationFailed(report)
    return graphic


def cmd_validate(args, out: TextIO) -> int:
    graphic = load_graphic(args.path)
    report = validate(graphic)
    out.write(report_service.render(report_service.validation_report(report), args.format))
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_sweep(args, out: TextIO) -> int:
    service = SweepService(_load_valid(args.path))
    out.write(report_service.render(report_service.sweep_report(service), args.format))
    return EXIT_OK


def cmd_slice(args, out: TextIO) -> int:
    service = SliceService(_load_valid(args.path))
    if args.level is None:
        report = report_service.profile_report(service.slice_profile(args.angle))
    else:
        report = report_service.slice_report(service.slice_census(args.angle, args.level))
    out.write(report_service.render(report, args.format))
    return EXIT_OK


def cmd_plot(args, out: TextIO) -> int:
    target = save_plot(_load_valid(args.path), args.out, args.angle)
    out.write(f"wrote {target}\n")
    return EXIT_OK


def cmd_examples(args, out: TextIO) -> int:
    factories = get_example_factories()
    if args.list:
        for name in factories:
            out.write(name + "\n")
        return EXIT_OK
    name, directory = args.emit
    names = list(factories) if name == "all" else [name]
    unknown = [n for n in names if n not in factories]
    if unknown:
        sys.stderr.write(f"unknown example: {unknown[0]} (choose from {', '.join(factories)})\n")
        return EXIT_IO
    for n in names:
        target = save_graphic(factories[n](), Path(directory) / f"{n}.json")
        out.write(f"wrote {target}\n")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "sweep": cmd_sweep,
    "slice": cmd_slice,
    "plot": cmd_plot,
    "examples": cmd_examples,
}


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ValidationFailed as exc:
        fmt = getattr(args, "format", "text")
        out.write(report_service.render(report_service.validation_report(exc.report), fmt))
        return EXIT_INVALID
    except (OSError, SchemaError, ChainError) as exc:
        LOGGER.error("%s", exc)
        sys.stderr.write(f"[ERROR] {exc}\n")
        return EXIT_IO
    except GraphicError as exc:
        LOGGER.error("%s", exc)
        sys.stderr.write(f"[ERROR] {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
