"""Rewrite the golden reports under tests/golden/ from the current code.

    python3 scripts/regenerate_golden.py [--check]

With ``--check`` nothing is written; the exit status is 1 if any golden
file is out of date.
"""

import argparse
import sys
from pathlib import Path

from strongchow.report import Options, build_report, dumps
from strongchow.scenario import load_fixture

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"
CASES = [("egs", "verify"), ("p2-flag", "verify"), ("quadric", "verify"), ("a2-unstable", "analyze")]


def golden_path(name: str, command: str) -> Path:
    return GOLDEN / f"{name}.{command}.json"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare instead of writing")
    args = ap.parse_args(argv)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    stale = []
    for name, command in CASES:
        text = dumps(build_report(load_fixture(name), command, Options()))
        path = golden_path(name, command)
        if args.check:
            if not path.exists() or path.read_text() != text:
                stale.append(path.name)
        else:
            path.write_text(text)
            print(f"wrote {path.relative_to(GOLDEN.parent.parent)}")
    if stale:
        print("out of date: " + ", ".join(stale), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
