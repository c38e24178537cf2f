#!/usr/bin/env python3
"""Iteration statistics for the birthday scan near an anchor prime size.

Collects screened primes at and above the anchor, scans each, and compares
the observed first-duplicate step count against the sqrt(p*pi/2) estimate.
Overwrite-only hashing delays some detections, so the ratio sits slightly
above 1; the Wilson early exits pull the tail in.

Usage:
    python scripts/birthday_stats.py --anchor 1e8 --count 250 --table-bits 19
"""

import argparse
import statistics

from socialist_sieve.collision import CollisionConfig, CollisionTable, expected_iterations, find_duplicate
from socialist_sieve.conditions import rs_filter
from socialist_sieve.primegen import PrimeRange, primes_in_range


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--anchor", type=float, default=1e8)
    ap.add_argument("--count", type=int, default=250)
    ap.add_argument("--table-bits", type=int, default=19)
    args = ap.parse_args()

    anchor = int(args.anchor)
    config = CollisionConfig(table_bits=args.table_bits)
    table = CollisionTable(args.table_bits)
    ratios = []
    iterations = []
    for p in primes_in_range(PrimeRange(anchor, 1 << 62)):
        if not rs_filter(p).rs_pass:
            continue
        out = find_duplicate(p, config, table)
        iterations.append(out.iterations)
        ratios.append(out.iterations / expected_iterations(p))
        if len(ratios) >= args.count:
            break

    print(f"{len(ratios)} screened primes from {anchor} up, table 2^{args.table_bits}")
    print(f"expected iterations at anchor: {expected_iterations(anchor):.0f}")
    print(f"observed mean: {statistics.mean(iterations):.0f}   "
          f"median: {statistics.median(iterations):.0f}   max: {max(iterations)}")
    print(f"ratio to estimate: mean {statistics.mean(ratios):.4f}   "
          f"stdev {statistics.pstdev(ratios):.4f}   max {max(ratios):.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
