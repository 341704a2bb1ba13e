"""Run ``verify`` on every bundled stable fixture and print the verdicts.

    python3 scripts/verify_all.py [--rational] [--out DIR]
"""

import argparse
import sys
import time
from pathlib import Path

from strongchow.git import PresentationError
from strongchow.report import VERDICTS, Options, all_verdicts_pass, build_report, dumps
from strongchow.scenario import fixture_names, load_fixture


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rational", action="store_true")
    ap.add_argument("--out", type=Path, help="directory for the JSON reports")
    args = ap.parse_args(argv)
    failed = False
    for name in fixture_names():
        sc = load_fixture(name)
        t0 = time.perf_counter()
        try:
            report = build_report(sc, "verify", Options(rational=args.rational))
        except PresentationError as e:
            print(f"{name}: skipped ({e})")
            continue
        dt = time.perf_counter() - t0
        line = ", ".join(f"{v}={report['verdicts'][v]['status']}" for v in VERDICTS)
        print(f"{name}: {line} [{dt:.1f}s]")
        failed |= not all_verdicts_pass(report)
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{name}.verify.json").write_text(dumps(report))
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
