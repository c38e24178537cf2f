#!/usr/bin/env python3
"""Build a CSV table of left-factorial residues r_p = !p mod p.

Regenerates tests/data/residues_below_10000.csv when run with defaults;
larger bounds make a fresh desk-scale residue database (the O(p) pass per
prime means total cost grows quadratically with the bound).

Usage:
    python scripts/build_residue_table.py --to 10000 --out residues.csv
"""

import argparse
import time

from socialist_sieve.leftfact import ResidueRecord, left_factorial_table, residue_table_write
from socialist_sieve.primegen import sieve_array


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--to", type=int, default=10_000, help="exclusive bound on p")
    ap.add_argument("--out", default="residues.csv")
    args = ap.parse_args()

    t0 = time.perf_counter()
    primes = sieve_array(args.to)
    residues = left_factorial_table(primes)
    records = [ResidueRecord(int(p), int(r)) for p, r in zip(primes, residues)]
    residue_table_write(records, args.out)
    dt = time.perf_counter() - t0
    zero = [r.p for r in records if not r.kurepa_ok]
    print(f"wrote {len(records)} records to {args.out} in {dt:.2f}s")
    if zero:
        print(f"KUREPA VIOLATION: p | !p for {zero}")
        return 3
    print("no prime in range divides its left factorial")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
