"""Command-line front end.

Subcommands: validate, analyze, chsh, generate, crosscheck. Exit codes are a
stable contract:

    0  noncontextual / ok
    1  validation failure (or crosscheck disagreement)
    2  usage error, parse failure, or size cap exceeded
    3  contextual
    4  traditional mode requested on an inconsistently connected system
    5  system is not the cyclic four-variable shape (chsh)

Input is a file path or '-' for standard input; reports go to standard
output unless --out is given. Reruns on identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .analysis import (
    InvalidSystemError,
    NONCONTEXTUAL,
    NotCyclicError,
    analyze,
    chsh_criterion,
)
from .coupling import CBD, TRADITIONAL, InconsistentSystemError, SizeCapError
from .generate import random_system
from .oracle import run_corpus
from .system import ParseError, parse_system, serialize_system, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_CONTEXTUAL = 3
EXIT_MODE_MISMATCH = 4
EXIT_NOT_CYCLIC = 5


def _fail(code: int, message: str) -> int:
    print(f"ctxlp: {message}", file=sys.stderr)
    return code


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _size_cap() -> int | None:
    raw = os.environ.get("CTX_SIZE_CAP")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(_fail(EXIT_USAGE, f"CTX_SIZE_CAP must be an integer, got {raw!r}"))


def _load_system(path: str):
    try:
        text = _read_input(path)
    except OSError as exc:
        raise SystemExit(_fail(EXIT_USAGE, f"cannot read {path!r}: {exc}"))
    try:
        return parse_system(text)
    except ParseError as exc:
        raise SystemExit(_fail(EXIT_USAGE, f"parse error: {exc}"))


def _cmd_validate(args: argparse.Namespace) -> int:
    sys_ = _load_system(args.input)
    problems = validate(sys_)
    if problems:
        for problem in problems:
            print(f"ctxlp: {problem}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    sys_ = _load_system(args.input)
    try:
        report = analyze(sys_, args.mode, cap_exp=_size_cap())
    except InvalidSystemError as exc:
        for problem in exc.problems:
            print(f"ctxlp: {problem}", file=sys.stderr)
        return EXIT_INVALID
    except InconsistentSystemError as exc:
        return _fail(EXIT_MODE_MISMATCH, str(exc))
    except SizeCapError as exc:
        return _fail(EXIT_USAGE, str(exc))
    _write_output(
        _json_text(report.to_json_dict(include_witness=args.certificate)), args.out
    )
    return EXIT_OK if report.decision == NONCONTEXTUAL else EXIT_CONTEXTUAL


def _cmd_chsh(args: argparse.Namespace) -> int:
    sys_ = _load_system(args.input)
    try:
        report = chsh_criterion(sys_)
    except InvalidSystemError as exc:
        for problem in exc.problems:
            print(f"ctxlp: {problem}", file=sys.stderr)
        return EXIT_INVALID
    except NotCyclicError as exc:
        return _fail(EXIT_NOT_CYCLIC, str(exc))
    _write_output(_json_text(report.to_json_dict()), args.out)
    return EXIT_OK if report.decision == NONCONTEXTUAL else EXIT_CONTEXTUAL


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        sys_ = random_system(args.seed, args.rank, args.consistent)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    _write_output(serialize_system(sys_), args.out)
    return EXIT_OK


def _cmd_crosscheck(args: argparse.Namespace) -> int:
    try:
        report = run_corpus(args.seed, args.count, args.shape, args.tolerance)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    _write_output(_json_text(report.to_json_dict()), args.out)
    if report.clean:
        return EXIT_OK
    return _fail(EXIT_INVALID, f"{len(report.disagreements)} decider disagreement(s)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxlp",
        description=(
            "Decide contextuality of systems of +-1 random variables by exact "
            "LP feasibility."
        ),
    )
    parser.add_argument("--version", action="version", version=f"ctxlp {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", help="check a system document")
    p.add_argument("input", nargs="?", default="-", help="path or - for stdin")
    p.set_defaults(run=_cmd_validate)

    p = commands.add_parser("analyze", help="exact LP contextuality decision")
    p.add_argument("input", nargs="?", default="-", help="path or - for stdin")
    p.add_argument("--mode", choices=[TRADITIONAL, CBD], required=True)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument(
        "--certificate",
        action="store_true",
        help="include the full witness in the report",
    )
    p.set_defaults(run=_cmd_analyze)

    p = commands.add_parser(
        "chsh", help="closed-form criterion for cyclic four-variable systems"
    )
    p.add_argument("input", nargs="?", default="-", help="path or - for stdin")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(run=_cmd_chsh)

    p = commands.add_parser("generate", help="emit a seeded random cyclic system")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--consistent", action="store_true")
    p.add_argument("--out", help="write the document here instead of stdout")
    p.set_defaults(run=_cmd_generate)

    p = commands.add_parser(
        "crosscheck", help="run exact, float, and closed-form deciders on a corpus"
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--shape", required=True, help="e.g. rank4-consistent")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(run=_cmd_crosscheck)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    except BrokenPipeError:
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
