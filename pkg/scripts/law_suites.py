"""Monad laws, algebra laws and simplicial identities for every bundled instance.

    python3 scripts/law_suites.py [--width 3] [--level3-nodes 6] [--narrow-width 2]
"""
import argparse
import sys
import time

from pevbar.bar import bundled_law_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--width", type=int, default=3)
    ap.add_argument("--max-level", type=int, default=3)
    ap.add_argument("--level3-nodes", type=int, default=6, help="node cap for level-3 terms in the wide pass")
    ap.add_argument("--narrow-width", type=int, default=2, help="width of the uncapped pass (0 skips it)")
    args = ap.parse_args()

    t0 = time.perf_counter()
    results = bundled_law_suite(args.width, args.max_level, args.level3_nodes, args.narrow_width,
                                progress=lambda label: print(f"{time.perf_counter() - t0:7.1f}s  {label}",
                                                             flush=True))
    bad = 0
    for label, reps in results:
        for r in reps:
            tag = f"w{r.details['width']}" + ("" if r.details["level3_max_nodes"] is None
                                              else f"/n{r.details['level3_max_nodes']}")
            print(f"  {r.status:4}  {tag:6} {r.check:22} {label}")
            bad += not r.passed
    print(f"{bad} failing reports, {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
