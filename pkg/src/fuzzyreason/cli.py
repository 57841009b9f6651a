"""Command-line front end: ``fuzzyreason {assess,profiles,combine,compare,rank,plot}``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .centroid import TieBreak
from .cohort_io import RECORDS, ModeError, ParseError, parse_cohort
from .fuzzy_core import DomainError, EmptyFuzzySetError, FuzzyError
from .profiles import dominance_report
from .report import RoundingMode, build_report, render_ranking, render_report
from .svg import render_svg

PROG = "fuzzyreason"

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_MODE = 4
EXIT_EMPTY = 5
EXIT_DOMAIN = 6
EXIT_IO = 7

MIN_INPUTS = {"assess": 1, "profiles": 1, "combine": 2, "compare": 2, "rank": 1, "plot": 1}
MAX_INPUTS = {"assess": 1, "profiles": 1, "rank": 1}
FORMATS = {
    "assess": ("markdown", "json", "csv", "svg"),
    "profiles": ("markdown", "json", "csv"),
    "combine": ("markdown", "json", "csv"),
    "compare": ("markdown", "json", "csv", "svg"),
    "rank": ("markdown", "json", "csv"),
    "plot": ("svg",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("inputs", nargs="+", metavar="INPUT", help="dataset path, or - for standard input")
    common.add_argument("--rounding", choices=[m.value for m in RoundingMode], default="exact")
    common.add_argument("--format", choices=["json", "csv", "markdown", "svg"], default=None)
    common.add_argument("--precision", type=int, default=3)
    common.add_argument("--output", "-o", default=None, metavar="PATH")
    common.add_argument("--stages", type=int, default=3, help="stage count expected in records input")
    common.add_argument("--input-format", choices=["csv", "json"], default=None, help="default: by extension or content")

    parser = _Parser(prog=PROG, description="Fuzzy assessment of reasoning stages for student groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("assess", parents=[common], help="stage fuzzy sets, distributions and centroids of one group")
    p = sub.add_parser("profiles", parents=[common], help="profile membership/possibility table of one group")
    p.add_argument("--probabilities", action="store_true", help="add probability columns")
    p = sub.add_parser("combine", parents=[common], help="pseudo-frequency table across groups")
    p.add_argument("--probabilities", action="store_true", help="add probability columns")
    for name, text in (("compare", "stagewise centroid comparison of groups"), ("plot", "SVG bar graphs and centroid diagram")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--tie-break", choices=[t.value for t in TieBreak], default=TieBreak.Y_C_DIRECTIONAL.value)
    sub.add_parser("rank", parents=[common], help="partial order of students by profile (records input)")
    return parser


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _load(args):
    datasets = []
    used = set()
    for path in args.inputs:
        fmt = args.input_format
        if fmt is None and path != "-":
            ext = os.path.splitext(path)[1].lower()
            fmt = {".csv": "csv", ".json": "json"}.get(ext)
        stem = "stdin" if path == "-" else Path(path).stem
        try:
            ds = parse_cohort(_read(path), fmt, group_name=stem, stages=args.stages)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}") from None
        name = ds.group_name
        i = 2
        while name in used:
            name = f"{ds.group_name}#{i}"
            i += 1
        used.add(name)
        if name != ds.group_name:
            ds = type(ds)(name, ds.mode, ds.stage_names, ds.records, ds.stage_sets)
        datasets.append(ds)
    return datasets


def run(args) -> bytes:
    """Execute a parsed command and return the document to emit."""
    cmd = args.command
    if len(args.inputs) < MIN_INPUTS[cmd]:
        raise UsageError(f"{cmd} needs at least {MIN_INPUTS[cmd]} inputs")
    if cmd in MAX_INPUTS and len(args.inputs) > MAX_INPUTS[cmd]:
        raise UsageError(f"{cmd} takes exactly one input")
    fmt = args.format or FORMATS[cmd][0]
    if fmt not in FORMATS[cmd]:
        raise UsageError(f"{cmd} cannot emit {fmt}")
    if args.precision < 1:
        raise UsageError("precision must be a positive integer")
    if args.stages < 1:
        raise UsageError("stages must be a positive integer")

    datasets = _load(args)
    mode = RoundingMode(args.rounding)

    if cmd == "rank":
        ds = datasets[0]
        if ds.mode != RECORDS:
            raise ModeError(f"rank needs per-student records; {args.inputs[0]} is pregraded")
        rank = dominance_report([(r.student_id, r.stage_labels) for r in ds.records])
        return render_ranking(rank, fmt)

    if cmd in ("profiles", "combine"):
        report = build_report(
            datasets, mode, args.precision, profiles=True, probabilities=args.probabilities, assess=False
        )
    elif cmd == "assess":
        report = build_report(datasets, mode, args.precision)
    else:
        report = build_report(
            datasets, mode, args.precision, compare=len(datasets) > 1, policy=TieBreak(args.tie_break)
        )
    if fmt == "svg":
        return render_svg(report).encode()
    return render_report(report, fmt)


def _diagnostic(exc: BaseException) -> tuple[int, str]:
    if isinstance(exc, UsageError):
        return EXIT_USAGE, f"usage error: {exc}"
    if isinstance(exc, ParseError):
        return EXIT_PARSE, f"parse error: {exc}"
    if isinstance(exc, ModeError):
        return EXIT_MODE, f"mode error: {exc}"
    if isinstance(exc, EmptyFuzzySetError):
        return EXIT_EMPTY, str(exc)
    if isinstance(exc, (DomainError, FuzzyError)):
        return EXIT_DOMAIN, f"invalid input: {exc}"
    if isinstance(exc, OSError):
        return EXIT_IO, f"i/o error: {exc.strerror or exc}: {getattr(exc, 'filename', '') or ''}".rstrip(": ")
    raise exc


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        doc = run(args)
        if args.output:
            Path(args.output).write_bytes(doc)
        else:
            sys.stdout.buffer.write(doc)
            sys.stdout.buffer.flush()
    except (UsageError, FuzzyError, OSError) as exc:
        code, message = _diagnostic(exc)
        print(f"{PROG}: {' '.join(message.split())}", file=sys.stderr)
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
