"""Run the three counterexample verifiers and print or save their reports.

    python3 scripts/reproduce_counterexamples.py [--jobs N] [--out DIR]
"""
import argparse
import pathlib
import sys

from pevbar.counterexamples import VERIFIERS, verify


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("which", nargs="?", default="all", choices=[*VERIFIERS, "all"])
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for the S9 search")
    ap.add_argument("--out", type=pathlib.Path, default=None, help="write one JSON report per verifier here")
    args = ap.parse_args()

    reports = verify(args.which, args.jobs)
    for rep in reports:
        print(rep.to_text())
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{rep.id}.json").write_text(rep.to_json() + "\n")
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
