"""Run every verification suite on every bundled fixture and print a table of
check counts, failures, skips and timings."""
import argparse
import time

from kgraph.io import FIXTURES, load_fixture
from kgraph.suites import SUITES, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixture", action="append", choices=FIXTURES, help="restrict to these fixtures")
    ap.add_argument("--suite", action="append", choices=SUITES, help="restrict to these suites")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    failed = 0
    print(f"{'fixture':<10} {'suite':<14} {'checks':>9} {'fail':>5} {'skip':>5} {'seconds':>8}")
    for name in args.fixture or FIXTURES:
        for suite in args.suite or SUITES:
            g = load_fixture(name)
            start = time.perf_counter()
            reports = run_suite(suite, g, seed=args.seed)[suite]
            spent = time.perf_counter() - start
            bad = [r for r in reports if not r.ok]
            failed += len(bad)
            skipped = sum(1 for r in reports if r.skipped)
            print(f"{name:<10} {suite:<14} {sum(r.checked for r in reports):>9} {len(bad):>5} {skipped:>5} {spent:>8.1f}")
            for r in bad:
                print(f"    {r.name}: {r.failures[:3]}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
