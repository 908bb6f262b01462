"""Command line interface: run, list, validate.

Exit codes: 0 when every check passes, 1 when any check fails, 2 when the
input does not parse or validate.  Reports are deterministic; wall-clock
timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .errors import KernelError, ScenarioError
from .report import Report
from .scenario import (
    SUITES,
    builtin_catalog,
    builtin_names,
    load_builtin,
    load_scenario,
    run_scenario,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


def _load(source: str):
    if source in builtin_names():
        return load_builtin(source)
    if os.path.exists(source):
        return load_scenario(source)
    raise ScenarioError(
        f"{source!r} is neither a builtin name nor an existing file "
        f"(builtins: {', '.join(builtin_names())})"
    )


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    try:
        scenario = _load(args.scenario)
    except ScenarioError as exc:
        loc = f" at {exc.location}" if exc.location is not None else ""
        print(f"invalid scenario{loc}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.suite:
        unknown = [s for s in args.suite if s not in SUITES]
        if unknown:
            print(
                f"unknown suite(s): {', '.join(unknown)} "
                f"(choices: {', '.join(SUITES)})",
                file=sys.stderr,
            )
            return EXIT_INVALID
        scenario.suites = tuple(dict.fromkeys(args.suite))
    started = time.monotonic()
    try:
        report = run_scenario(scenario, degree=args.degree)
    except KernelError as exc:
        print(f"invalid scenario: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    elapsed = time.monotonic() - started
    text = report.to_json() if args.format == "json" else report.to_text()
    _emit(text, args.out)
    print(f"{scenario.name}: {elapsed:.2f}s", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_list(_args) -> int:
    for name, blurb in builtin_catalog():
        print(f"{name}: {blurb}")
    return EXIT_PASS


def cmd_validate(args) -> int:
    try:
        scenario = _load(args.scenario)
    except ScenarioError as exc:
        loc = f" at {exc.location}" if exc.location is not None else ""
        print(f"invalid scenario{loc}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(scenario.canonical_json(), end="")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcverify",
        description=(
            "Exact verification of generalized complex structure identities "
            "on a coordinate chart."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run verification suites on a scenario")
    run_p.add_argument("scenario", help="builtin name or path to a scenario JSON file")
    run_p.add_argument(
        "--suite",
        action="append",
        metavar="NAME",
        help=f"suite to run (repeatable; choices: {', '.join(SUITES)}); "
        "default: the scenario's list",
    )
    run_p.add_argument(
        "--degree",
        type=int,
        default=None,
        metavar="K",
        help="battery depth: monomial multipliers up to this degree (default: scenario)",
    )
    run_p.add_argument(
        "--format", choices=("text", "json"), default="text", help="report format"
    )
    run_p.add_argument("--out", metavar="PATH", help="write the report to a file")
    run_p.set_defaults(func=cmd_run)

    list_p = sub.add_parser("list", help="list builtin scenarios")
    list_p.set_defaults(func=cmd_list)

    val_p = sub.add_parser("validate", help="validate and canonicalize a scenario")
    val_p.add_argument("scenario", help="builtin name or path to a scenario JSON file")
    val_p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
