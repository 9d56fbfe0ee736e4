#!/usr/bin/env python3
"""Run the full verification suite and print one line per check.

Usage:  python scripts/run_verify.py [suite] [report.json]

Suites: analytic (closed forms and ratio bounds only, seconds) or default
(adds the discrete 1D/radial/2D cross-checks, still well under a minute).
Exits nonzero if any bound fails, so it can gate CI directly.
"""

import sys

from pdethick import harness


def main() -> int:
    suite = sys.argv[1] if len(sys.argv) > 1 else "default"
    report = harness.verify_theorems(suite)
    for check in report.checks:
        worst = ""
        if check.samples:
            gap = min(s.bound + s.slack - s.error for s in check.samples)
            worst = f"  tightest margin {gap:.3e}"
        status = "pass" if check.passed else "FAIL"
        print(f"{check.case:28s} {status}{worst}")
        if check.error_message:
            print(f"{'':28s}      {check.error_message}")
    print(f"suite {report.suite}: {'pass' if report.passed else 'FAIL'}")
    if len(sys.argv) > 2:
        with open(sys.argv[2], "w") as handle:
            handle.write(harness.dumps_json(report.to_dict()))
            handle.write("\n")
        print(f"wrote {sys.argv[2]}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
