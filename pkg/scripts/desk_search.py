#!/usr/bin/env python3
"""Desk-scale confirmation run: no socialist primes up to a bound.

Reproduces the headline sweep with the congruence screen plus the birthday
scan, checkpointed so an interrupted run resumes where it stopped.

Usage:
    python scripts/desk_search.py                 # default bound 10^8
    python scripts/desk_search.py --to 1e9 --threads 4 --resume
"""

import argparse
import sys
import time
from pathlib import Path

from socialist_sieve.collision import CollisionConfig
from socialist_sieve.primegen import PrimeRange
from socialist_sieve.search import SearchConfig, run_search


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--to", type=float, default=1e8, help="exclusive upper bound (default 1e8)")
    ap.add_argument("--filters", default="rs", help="comma list from rs,t,qf,lfc")
    ap.add_argument("--table-bits", type=int, default=19)
    ap.add_argument("--threads", type=int, default=0)
    ap.add_argument("--out", default="desk_search.jsonl")
    ap.add_argument("--checkpoint", default="desk_search.ckpt.json")
    ap.add_argument("--resume", action="store_true")
    args = ap.parse_args()

    config = SearchConfig(
        range=PrimeRange(6, int(args.to) + 1),
        filters=tuple(args.filters.split(",")),
        collision=CollisionConfig(table_bits=args.table_bits),
        chunk_size=20_000,
        workers=args.threads,
        checkpoint_path=args.checkpoint,
    )
    t0 = time.perf_counter()
    report = run_search(config, resume=args.resume, out=args.out, progress=True)
    dt = time.perf_counter() - t0
    print(f"range [6, {int(args.to) + 1}): {report.primes_seen} primes")
    print(f"screen survivors scanned: {report.eliminated + report.candidates}")
    print(f"eliminated: {report.eliminated}   candidates: {report.candidates}")
    print(f"mean iterations/scan: {report.iterations_mean:.1f} "
          f"(ratio to sqrt(p*pi/2): {report.iterations_mean_ratio:.4f})")
    print(f"records: {Path(args.out).resolve()}   wall time: {dt:.1f}s")
    if report.survivors:
        print(f"SURVIVORS (investigate!): {report.survivors}", file=sys.stderr)
        return 3
    print("no socialist primes in range")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
