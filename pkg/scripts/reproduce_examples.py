"""Rebuild every reference example and print a diff summary.

    python scripts/reproduce_examples.py [--verbose]
"""

import argparse
import sys

from extremal_lab.exact_poly import Polynomial, format_poly
from extremal_lab.fixtures.golden import ERRATA, GOLDEN
from extremal_lab.reproduce import SCENARIOS, golden_diff


def describe_errata() -> None:
    for name, fix in ERRATA.items():
        print(f"{name}: {fix['reason']}")
        for verb in ("remove", "add"):
            for k, coef, mono in fix[verb]:
                print(f"  {verb} v{k}: {coef} * " + "*".join(f"x{v}^{p}" if p > 1 else f"x{v}" for v, p in sorted(mono.items())))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--verbose", action="store_true", help="list every misprint position")
    args = ap.parse_args()
    ok = True
    for name, run in SCENARIOS.items():
        res = run()
        ok &= res.passed
        print(f"{name:16s} {'PASS' if res.passed else 'FAIL'}")
        for line in res.lines:
            print(f"    {line}")
    if args.verbose:
        print()
        describe_errata()
        for name in GOLDEN:
            d = golden_diff(name)
            for alpha, k, got, want in d.verbatim:
                mono = format_poly(Polynomial.monomial(alpha, 1))
                print(f"  {name} v{k} {mono}: computed {got}, displayed {want}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
