"""Command line entry point.

    strongchow <command> <scenario> [--max-degree N] [--rational] [--trace] [--json out.json]
    strongchow --fixtures

``<scenario>`` is a JSON file or the name of a bundled fixture.  Exit status
is 0 when every requested verdict passes, 2 when a conjecture check fails
and 1 on input or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .git import PresentationError
from .reichstein import ReichsteinError
from .report import COMMANDS, Options, all_verdicts_pass, build_report, dumps
from .scenario import ScenarioError, fixture_names, load_fixture, parse_scenario

EXIT_OK, EXIT_INPUT, EXIT_FAILED = 0, 1, 2


def _load(arg: str):
    path = Path(arg)
    if path.is_file():
        return parse_scenario(path.read_text())
    if arg in fixture_names():
        return load_fixture(arg)
    raise ScenarioError(f"no such scenario file or fixture: {arg}")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strongchow", description="Strong Chow groups of torus quotient stacks.")
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("scenario", nargs="?", help="scenario JSON file or bundled fixture name")
    ap.add_argument("--max-degree", type=int, default=None, help="degree bound for the stack Chow ring")
    ap.add_argument("--rational", action="store_true", help="compare classes over Q")
    ap.add_argument("--trace", action="store_true", help="include the full Reichstein trace")
    ap.add_argument("--fixtures", action="store_true", help="list bundled scenarios and exit")
    ap.add_argument("--json", metavar="FILE", help="write the report to FILE instead of stdout")
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    if args.fixtures:
        for name in fixture_names():
            print(name)
        return EXIT_OK
    if args.command is None or args.scenario is None:
        ap.print_usage(sys.stderr)
        print("error: command and scenario are required", file=sys.stderr)
        return EXIT_INPUT
    if args.max_degree is not None and args.max_degree < 0:
        print("error: --max-degree must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        sc = _load(args.scenario)
        report = build_report(sc, args.command, Options(args.max_degree, args.rational, args.trace))
    except (ScenarioError, PresentationError, ReichsteinError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = dumps(report)
    if args.json:
        Path(args.json).write_text(text)
        for name, v in sorted(report.get("verdicts", {}).items()):
            print(f"{name}: {v['status']}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_verdicts_pass(report) else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
