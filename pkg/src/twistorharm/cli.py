"""Command line: ``twistorharm analyze <file> | --example NAME``."""

from __future__ import annotations

import argparse
import sys

from .config import BUILTINS, builtin, parse_config
from .errors import ConfigError, NotIntegrableError, RouteMismatchError
from .harmonicity import NOT_HARMONIC
from .report import AnalysisOptions, render, run_analysis
from .scalars import ParameterSet, parse_scalar

EXIT_OK, EXIT_NOT_HARMONIC, EXIT_INPUT, EXIT_ROUTE = 0, 1, 2, 3


def _pairs(text: str, flag: str) -> list[tuple[str, str]]:
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        name, sep, value = item.partition("=")
        if not sep or not name.strip() or not value.strip():
            raise ConfigError(f"{flag}: expected name=value, got {item!r}")
        out.append((name.strip(), value.strip()))
    return out


def _sign_name(name: str) -> str:
    if name.startswith("eps") and not name.startswith("epsilon"):
        return "epsilon" + name[3:]
    return name


def parse_case(texts, params) -> dict[str, int]:
    case = {}
    for text in texts or ():
        for name, value in _pairs(text, "--case"):
            name = _sign_name(name)
            if name not in params or not params[name].is_sign:
                raise ConfigError(f"--case: {name} is not a sign parameter")
            if value not in ("+1", "1", "-1"):
                raise ConfigError(f"--case: {name} must be +1 or -1")
            case[name] = -1 if value == "-1" else 1
    return case


def parse_check(text: str, params) -> dict:
    out = {}
    for name, value in _pairs(text, "--check"):
        name = _sign_name(name)
        if name not in params:
            raise ConfigError(f"--check: unknown parameter {name}")
        out[name] = parse_scalar(value, ParameterSet.of())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistorharm", description="Harmonicity of Hermitian structures on 4-dimensional metric Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="analyze a configuration document or a builtin example")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?", help="JSON configuration document")
    src.add_argument("--example", choices=sorted(BUILTINS), help="builtin example")
    a.add_argument("--format", choices=("table", "json"), default="table")
    a.add_argument("--check", metavar="a1=0,a2=1,...", help="evaluate the constraints at a candidate assignment")
    a.add_argument("--self-test", action="store_true", help="run only the two-route identity suite")
    a.add_argument("--case", action="append", metavar="eps1=+1", help="restrict sign cases (repeatable)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.example:
            cfg = builtin(args.example)
        else:
            try:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read {args.file}: {exc.strerror}") from None
            cfg = parse_config(text)
        options = AnalysisOptions(
            restrict=parse_case(args.case, cfg.params),
            self_test_only=args.self_test,
            candidate=parse_check(args.check, cfg.params) if args.check else None,
        )
        report = run_analysis(cfg, options)
    except RouteMismatchError as exc:
        print(f"error: internal route mismatch: {exc}", file=sys.stderr)
        return EXIT_ROUTE
    except (ConfigError, NotIntegrableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out.write(render(report, args.format))
    if args.self_test:
        return EXIT_OK
    if report.candidate is not None:
        return EXIT_OK if report.candidate["status"] != NOT_HARMONIC else EXIT_NOT_HARMONIC
    return EXIT_NOT_HARMONIC if report.status == NOT_HARMONIC else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
