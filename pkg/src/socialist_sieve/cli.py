"""Command-line interface.

All machine-readable output (JSON objects, CSV rows) goes to stdout;
progress and warnings go to stderr. Exit codes: 0 success, 1 usage or
configuration error, 2 I/O error, 3 a socialist-prime candidate survived
the run (the headline outcome, distinguishable in shell pipelines).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .collision import CollisionConfig
from .conditions import evaluate_conditions
from .heuristics import interval_sum_wp, ln_wp, tail_bound, wp_upper_bound
from .leftfact import (
    ResidueRecord,
    generalized_left_factorial_mod,
    left_factorial_mod,
    residue_table_write,
)
from .modmath import is_prime
from .oracle import ORACLE_PRIME_LIMIT, SocialistVerdict, brute_force_socialist
from .primegen import PrimeRange, primes_in_range
from .search import CheckpointError, SearchConfig, run_search

THREADS_ENV_VAR = "SOCIALIST_SIEVE_THREADS"


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(obj: dict) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _verdict_dict(v: SocialistVerdict) -> dict:
    return {
        "p": v.p,
        "is_socialist": v.is_socialist,
        "duplicate": list(v.duplicate) if v.duplicate else None,
        "missing_residue": v.missing_residue,
        "res_r_consistent": v.res_r_consistent,
    }


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _cmd_search(args) -> int:
    workers = args.threads
    if workers is None:
        env = os.environ.get(THREADS_ENV_VAR)
        workers = int(env) if env else 0
    if args.checkpoint and not args.out:
        raise ValueError("--checkpoint requires --out (resume truncates the output file)")
    config = SearchConfig(
        range=PrimeRange(args.start, args.stop),
        filters=tuple(args.filters.split(",")),
        collision=CollisionConfig(table_bits=args.table_bits, witness_mode=args.witness),
        chunk_size=args.chunk_size,
        workers=workers,
        checkpoint_path=args.checkpoint,
        output_format=args.format,
    )
    report = run_search(config, resume=args.resume, out=args.out, progress=True)
    print(
        f"searched [{args.start}, {args.stop}): {report.primes_seen} primes, "
        f"{report.eliminated} eliminated, {report.candidates} candidates, "
        f"{len(report.survivors)} survivors in {report.elapsed_seconds:.1f}s",
        file=sys.stderr,
    )
    return 3 if report.survivors else 0


def _cmd_verify(args) -> int:
    found_survivor = False
    if args.prime is not None:
        _require_prime(args.prime)
        verdict = brute_force_socialist(args.prime)
        _emit(_verdict_dict(verdict))
        found_survivor = verdict.is_socialist and verdict.p > 5
    else:
        if args.to > ORACLE_PRIME_LIMIT:
            raise ValueError(f"--to is desk-bounded at 2**24, got {args.to}")
        for p in primes_in_range(PrimeRange(3, args.to + 1)):
            verdict = brute_force_socialist(p)
            _emit(_verdict_dict(verdict))
            if verdict.is_socialist and p > 5:
                found_survivor = True
    return 3 if found_survivor else 0


def _cmd_conditions(args) -> int:
    _require_prime(args.prime)
    _emit(evaluate_conditions(args.prime).to_json_dict())
    return 0


def _cmd_leftfact(args) -> int:
    ks = [int(k) for k in args.k.split(",")] if args.k else None
    if args.out and ks:
        raise ValueError("--out writes the (p, r_p) table and cannot be combined with --k")
    if args.prime is not None:
        _require_prime(args.prime)
        primes = [args.prime]
    else:
        primes = list(primes_in_range(PrimeRange(2, args.to + 1)))
    records: list[ResidueRecord] = []
    for p in primes:
        if ks:
            for res in generalized_left_factorial_mod(p, ks):
                _emit({"p": res.p, "k": res.k, "value": res.value})
        else:
            rec = left_factorial_mod(p)
            records.append(rec)
            if not args.out:
                _emit({"p": rec.p, "r_p": rec.r_p})
    if args.out:
        residue_table_write(records, args.out)
        print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


def _cmd_estimate(args) -> int:
    if args.wp is not None:
        _emit(ln_wp(args.wp).to_json_dict())
        _emit(wp_upper_bound(args.wp).to_json_dict())
    elif args.tail is not None:
        _emit(tail_bound(args.tail).to_json_dict())
    else:
        a, b = args.interval
        _emit(interval_sum_wp(a, b).to_json_dict())
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="socialist-sieve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_search = sub.add_parser("search", help="filter + collision-scan a prime range")
    p_search.add_argument("--from", dest="start", type=int, required=True, metavar="A",
                          help="range start (inclusive)")
    p_search.add_argument("--to", dest="stop", type=int, required=True, metavar="B",
                          help="range end (exclusive)")
    p_search.add_argument("--filters", default="rs",
                          help="comma list from rs,t,qf,lfc (rs is mandatory; default: rs)")
    p_search.add_argument("--table-bits", type=int, default=19,
                          help="collision table holds 2**S entries (default: 19)")
    p_search.add_argument("--witness", action="store_true",
                          help="store indices so table hits report witness pairs")
    p_search.add_argument("--threads", type=int, default=None,
                          help=f"worker threads (default: ${THREADS_ENV_VAR} or CPU count)")
    p_search.add_argument("--chunk-size", type=int, default=10_000,
                          help="primes per work unit (default: 10000)")
    p_search.add_argument("--checkpoint", metavar="PATH", help="checkpoint file, updated per chunk")
    p_search.add_argument("--resume", action="store_true", help="resume from the checkpoint file")
    p_search.add_argument("--format", choices=("jsonl", "csv"), default="jsonl",
                          help="record format (default: jsonl)")
    p_search.add_argument("--out", metavar="PATH", help="write records here instead of stdout")
    p_search.set_defaults(func=_cmd_search)

    p_verify = sub.add_parser("verify",
                              help="brute-force distinctness verdict for single primes or a range")
    g = p_verify.add_mutually_exclusive_group(required=True)
    g.add_argument("--prime", type=int, help="verify this prime")
    g.add_argument("--to", type=int, help="verify every prime up to this bound (inclusive)")
    p_verify.set_defaults(func=_cmd_verify)

    p_cond = sub.add_parser("conditions",
                            help="evaluate the congruence and cubic screens for one prime")
    p_cond.add_argument("--prime", type=int, required=True)
    p_cond.set_defaults(func=_cmd_conditions)

    p_lf = sub.add_parser("leftfact",
                          help="left-factorial residues !p mod p (optionally generalized)")
    g = p_lf.add_mutually_exclusive_group(required=True)
    g.add_argument("--prime", type=int, help="single prime")
    g.add_argument("--to", type=int, help="every prime up to this bound (inclusive)")
    p_lf.add_argument("--k", metavar="LIST", help="comma list of exponents for the generalized sum")
    p_lf.add_argument("--out", metavar="PATH", help="write a CSV residue table instead of JSON lines")
    p_lf.set_defaults(func=_cmd_leftfact)

    p_est = sub.add_parser("estimate",
                           help="log-space heuristic estimates")
    g = p_est.add_mutually_exclusive_group(required=True)
    g.add_argument("--wp", type=int, metavar="P", help="exact ln W_p and its closed-form bound")
    g.add_argument("--tail", type=float, metavar="A", help="bound on socialist primes greater than A")
    g.add_argument("--interval", type=int, nargs=2, metavar=("A", "B"),
                   help="sum of W_p over primes in [A, B)")
    p_est.set_defaults(func=_cmd_estimate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    raise SystemExit(main())
