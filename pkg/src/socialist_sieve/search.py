"""Range search pipeline: sieve, screens, collision scan, report.

Primes stream out of the segmented sieve in contiguous chunks; worker
threads run each chunk through the fixed filter order (mod-8 congruence,
(5/p), (-23/p), then the cubic screen and the O(p) screens when enabled)
and scan the survivors for factorial duplicates. Results merge back in
range order, so output is byte-deterministic for a given configuration no
matter how many workers run. A checkpoint is written atomically after every
chunk; resuming skips completed chunks and truncates the output file back
to the last committed byte.

The compiled pipeline handles chunks whose primes all sit below 2**31;
larger primes take an exact pure-Python path with identical semantics.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import sys
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels
from .collision import CollisionConfig, CollisionStatus, CollisionTable, find_duplicate
from .conditions import CUBIC_DISCRIMINANT, cubic_roots, quarter_factorial_filter
from .leftfact import lfc_check
from .modmath import jacobi
from .oracle import ORACLE_PRIME_LIMIT, brute_force_socialist
from .primegen import PrimeRange, segment_prime_arrays

VALID_FILTERS = ("rs", "t", "qf", "lfc")

_STATUS_STRINGS = {6: "eliminated", 7: "candidate", 8: "iteration_cap"}

_CSV_HEADER = b"p,status,iterations,witness_i,witness_j,witness_value\n"


class CheckpointError(Exception):
    """Checkpoint cannot be used: corrupt, mismatched or already finished."""


class SearchInterrupted(Exception):
    """Raised by the stop_after_chunks hook once the checkpoint is durable."""


@dataclass(frozen=True)
class SearchConfig:
    range: PrimeRange
    filters: tuple[str, ...] = ("rs",)
    collision: CollisionConfig = field(default_factory=CollisionConfig)
    chunk_size: int = 10_000
    workers: int = 0  # 0 = one per CPU
    checkpoint_path: str | None = None
    output_format: str = "jsonl"

    def __post_init__(self) -> None:
        filters = tuple(f for f in VALID_FILTERS if f in self.filters)
        unknown = set(self.filters) - set(VALID_FILTERS)
        if unknown:
            raise ValueError(f"unknown filters: {sorted(unknown)}")
        if "rs" not in filters:
            raise ValueError("the rs screen is mandatory: later stages assume p == 5 (mod 8)")
        if ("qf" in filters or "lfc" in filters) and self.range.hi > ORACLE_PRIME_LIMIT:
            raise ValueError("qf/lfc are O(p) screens, allowed only for ranges below 2**24")
        object.__setattr__(self, "filters", filters)
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        if self.workers < 0:
            raise ValueError("workers must be >= 0")
        if self.output_format not in ("jsonl", "csv"):
            raise ValueError(f"output_format must be jsonl or csv, got {self.output_format}")


@dataclass
class SearchReport:
    primes_seen: int
    rejected: dict[str, int]
    rs_passed: int
    t_passed: int | None
    eliminated: int
    candidates: int
    survivors: list[int]
    refuted_candidates: int
    iterations_mean: float | None
    iterations_max: int | None
    iterations_mean_ratio: float | None
    elapsed_seconds: float

    def to_json_dict(self) -> dict:
        # elapsed_seconds is deliberately excluded: serialized output must be
        # byte-identical across reruns of the same configuration.
        return {
            "primes_seen": self.primes_seen,
            "rs_passed": self.rs_passed,
            "t_passed": self.t_passed,
            "eliminated": self.eliminated,
            "candidates": self.candidates,
            "rejected": dict(self.rejected),
            "iterations_mean": self.iterations_mean,
            "iterations_max": self.iterations_max,
            "iterations_mean_ratio": self.iterations_mean_ratio,
            "survivors": list(self.survivors),
            "refuted_candidates": self.refuted_candidates,
        }


@dataclass
class SearchCheckpoint:
    config_digest: str
    completed_chunks: list[tuple[int, int]]
    counters: dict
    survivors: list[int]
    extra: dict


def config_digest(config: SearchConfig) -> str:
    """Stable digest of everything that affects results (not workers/paths)."""
    payload = {
        "lo": config.range.lo,
        "hi": config.range.hi,
        "segment_size": config.range.segment_size,
        "filters": list(config.filters),
        "table_bits": config.collision.table_bits,
        "witness_mode": config.collision.witness_mode,
        "max_iterations": config.collision.max_iterations,
        "chunk_size": config.chunk_size,
        "output_format": config.output_format,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def checkpoint_save(state: SearchCheckpoint, path: str | os.PathLike) -> None:
    """Atomic write: temp file in the same directory, then rename over."""
    doc = {
        "config_digest": state.config_digest,
        "completed_chunks": [list(c) for c in state.completed_chunks],
        "counters": state.counters,
        "survivors": state.survivors,
        "extra": state.extra,
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def checkpoint_resume(config: SearchConfig, path: str | os.PathLike) -> SearchCheckpoint:
    """Load and validate a checkpoint for this configuration."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc
    required = {"config_digest", "completed_chunks", "counters", "survivors", "extra"}
    if not isinstance(doc, dict) or not required.issubset(doc):
        raise CheckpointError(f"corrupt checkpoint {path}: missing fields")
    digest = config_digest(config)
    if doc["config_digest"] != digest:
        raise CheckpointError(
            f"checkpoint {path} was written by a different configuration "
            f"(digest {doc['config_digest'][:12]}.. != {digest[:12]}..)"
        )
    return SearchCheckpoint(
        config_digest=doc["config_digest"],
        completed_chunks=[tuple(c) for c in doc["completed_chunks"]],
        counters=dict(doc["counters"]),
        survivors=list(doc["survivors"]),
        extra=dict(doc["extra"]),
    )


def _chunks(config: SearchConfig) -> Iterator[tuple[int, np.ndarray]]:
    buf: list[np.ndarray] = []
    size = 0
    idx = 0
    for arr in segment_prime_arrays(config.range):
        while arr.size:
            take = min(config.chunk_size - size, arr.size)
            buf.append(arr[:take])
            size += take
            arr = arr[take:]
            if size == config.chunk_size:
                yield idx, np.concatenate(buf)
                idx += 1
                buf = []
                size = 0
    if size:
        yield idx, np.concatenate(buf)


def _process_chunk_python(primes: np.ndarray, config: SearchConfig, table: CollisionTable):
    """Exact fallback for chunks containing primes >= 2**31."""
    n = primes.shape[0]
    st = np.zeros(n, dtype=np.int8)
    its = np.zeros(n, dtype=np.int64)
    wi = np.full(n, -1, dtype=np.int64)
    wj = np.full(n, -1, dtype=np.int64)
    wv = np.full(n, -1, dtype=np.int64)
    apply_t = "t" in config.filters
    apply_qf = "qf" in config.filters
    apply_lfc = "lfc" in config.filters
    for i in range(n):
        p = int(primes[i])
        if p % 8 != 5:
            st[i] = 0
            continue
        if jacobi(5, p) != -1:
            st[i] = 1
            continue
        if jacobi(-23, p) != 1:
            st[i] = 2
            continue
        if apply_t:
            if jacobi(CUBIC_DISCRIMINANT, p) == -1:
                y = cubic_roots(p).roots[0]
                if jacobi(4 * y + 25, p) != -1:
                    st[i] = 3
                    continue
        if apply_qf and not quarter_factorial_filter(p):
            st[i] = 4
            continue
        if apply_lfc and not lfc_check(p):
            st[i] = 5
            continue
        outcome = find_duplicate(p, config.collision, table)
        its[i] = outcome.iterations
        if outcome.witness is not None:
            wi[i], wj[i], wv[i] = outcome.witness
        if outcome.status is CollisionStatus.ELIMINATED:
            st[i] = 6
        elif outcome.status is CollisionStatus.CANDIDATE:
            st[i] = 7
        else:
            st[i] = 8
    return st, its, wi, wj, wv


class _Sink:
    """Byte-counting output sink over a file path or stdout."""

    def __init__(self, path: str | os.PathLike | None, append: bool):
        if path is None:
            self._fh = sys.stdout.buffer
            self._own = False
        else:
            self._fh = open(path, "ab" if append else "wb")
            self._own = True

    def write(self, data: bytes) -> int:
        self._fh.write(data)
        return len(data)

    def flush(self) -> None:
        self._fh.flush()

    def close(self) -> None:
        self.flush()
        if self._own:
            self._fh.close()


def _record_bytes(fmt: str, p: int, code: int, its: int, wi: int, wj: int, wv: int) -> bytes:
    status = _STATUS_STRINGS[code]
    if fmt == "jsonl":
        if wi >= 0:
            return (
                f'{{"p":{p},"status":"{status}","iterations":{its},'
                f'"witness":[{wi},{wj},{wv}]}}\n'
            ).encode()
        return f'{{"p":{p},"status":"{status}","iterations":{its}}}\n'.encode()
    if wi >= 0:
        return f"{p},{status},{its},{wi},{wj},{wv}\n".encode()
    return f"{p},{status},{its},,,\n".encode()


def run_search(
    config: SearchConfig,
    *,
    resume: bool = False,
    out: str | os.PathLike | None = None,
    progress: bool = False,
    stop_after_chunks: int | None = None,
) -> SearchReport:
    """Run the full pipeline; returns the merged report.

    ``out`` is the record sink (stdout when None). ``stop_after_chunks``
    stops cleanly after that many newly processed chunks by raising
    SearchInterrupted once the checkpoint is durable, which is how both
    tests and operators emulate an interruption.
    """
    t0 = time.perf_counter()
    workers = config.workers or os.cpu_count() or 1
    apply_t = "t" in config.filters
    digest = config_digest(config)

    counters = {"primes_seen": 0, "rs_passed": 0, "t_passed": 0, "eliminated": 0, "candidates": 0}
    rejected = {"rs": 0, "t": 0, "qf": 0, "lfc": 0}
    stats = {"scanned": 0, "iter_sum": 0, "iter_max": 0, "ratio_sum": 0.0}
    raw_candidates: list[tuple[int, str]] = []
    completed: list[tuple[int, int]] = []
    output_bytes = 0

    if resume:
        if config.checkpoint_path is None:
            raise CheckpointError("resume requires checkpoint_path in the configuration")
        state = checkpoint_resume(config, config.checkpoint_path)
        if state.extra.get("finished"):
            raise CheckpointError("checkpointed run is already complete")
        if out is None:
            raise CheckpointError("resume requires a file output to truncate")
        counters.update(state.counters)
        rejected.update(state.extra["rejected"])
        for key in ("scanned", "iter_sum", "iter_max", "ratio_sum"):
            stats[key] = state.extra[key]
        raw_candidates = [(int(p), s) for p, s in state.extra["raw_candidates"]]
        completed = [tuple(c) for c in state.completed_chunks]
        output_bytes = int(state.extra["output_bytes"])
        if not os.path.exists(out) or os.path.getsize(out) < output_bytes:
            raise CheckpointError("output file is shorter than the checkpointed offset")
        os.truncate(out, output_bytes)

    sink = _Sink(out, append=resume)
    if not resume and config.output_format == "csv":
        output_bytes += sink.write(_CSV_HEADER)

    tls = threading.local()

    def get_table() -> CollisionTable:
        table = getattr(tls, "table", None)
        if table is None:
            table = CollisionTable(config.collision.table_bits, config.collision.witness_mode)
            tls.table = table
        return table

    max_iter = config.collision.max_iterations or 0

    def worker(primes: np.ndarray):
        table = get_table()
        if int(primes[-1]) < _kernels.KERNEL_PRIME_LIMIT:
            n = primes.shape[0]
            st = np.zeros(n, dtype=np.int8)
            its = np.zeros(n, dtype=np.int64)
            wi = np.empty(n, dtype=np.int64)
            wj = np.empty(n, dtype=np.int64)
            wv = np.empty(n, dtype=np.int64)
            gen0 = table.reserve_generations(n)
            _kernels.filter_chunk(
                primes,
                apply_t,
                "qf" in config.filters,
                "lfc" in config.filters,
                config.collision.table_bits,
                table.values,
                table.gens,
                table.idxs,
                gen0,
                config.collision.witness_mode,
                max_iter,
                st,
                its,
                wi,
                wj,
                wv,
            )
            return st, its, wi, wj, wv
        return _process_chunk_python(primes, config, table)

    def make_state(finished: bool) -> SearchCheckpoint:
        counters["candidates"] = len(raw_candidates)
        return SearchCheckpoint(
            config_digest=digest,
            completed_chunks=list(completed),
            counters=dict(counters),
            survivors=[p for p, _ in raw_candidates],
            extra={
                "rejected": dict(rejected),
                "scanned": stats["scanned"],
                "iter_sum": stats["iter_sum"],
                "iter_max": stats["iter_max"],
                "ratio_sum": stats["ratio_sum"],
                "output_bytes": output_bytes,
                "raw_candidates": [[p, s] for p, s in raw_candidates],
                "finished": finished,
            },
        )

    chunk_iter = _chunks(config)
    pending: deque[tuple[int, np.ndarray, object]] = deque()
    pool = ThreadPoolExecutor(max_workers=workers)
    handled = 0
    try:
        def submit_next() -> None:
            for idx, arr in chunk_iter:
                if idx < len(completed):
                    expect = (int(arr[0]), int(arr[-1]) + 1)
                    if tuple(completed[idx]) != expect:
                        raise CheckpointError(
                            f"chunk {idx} layout mismatch: checkpoint has "
                            f"{completed[idx]}, derived {expect}"
                        )
                    continue
                pending.append((idx, arr, pool.submit(worker, arr)))
                return

        for _ in range(workers * 2 + 1):
            submit_next()

        while pending:
            idx, arr, fut = pending.popleft()
            st, its, wi, wj, wv = fut.result()
            submit_next()

            if (st == 99).any():
                bad = int(arr[np.flatnonzero(st == 99)[0]])
                raise RuntimeError(f"unexpected cubic factorization shape at p={bad}")
            counts = np.bincount(st, minlength=9)
            counters["primes_seen"] += int(arr.shape[0])
            rejected["rs"] += int(counts[0] + counts[1] + counts[2])
            rejected["t"] += int(counts[3])
            rejected["qf"] += int(counts[4])
            rejected["lfc"] += int(counts[5])
            counters["rs_passed"] += int(arr.shape[0] - counts[0] - counts[1] - counts[2])
            if apply_t:
                counters["t_passed"] += int(counts[4] + counts[5] + counts[6] + counts[7] + counts[8])
            scanned_idx = np.flatnonzero(st >= 6)
            if scanned_idx.size:
                sc_its = its[scanned_idx]
                sc_p = arr[scanned_idx]
                stats["scanned"] += int(scanned_idx.size)
                stats["iter_sum"] += int(sc_its.sum())
                stats["iter_max"] = max(stats["iter_max"], int(sc_its.max()))
                stats["ratio_sum"] += float(
                    (sc_its / np.sqrt(sc_p * (math.pi / 2))).sum()
                )
                for i in scanned_idx:
                    code = int(st[i])
                    p = int(arr[i])
                    output_bytes += sink.write(
                        _record_bytes(
                            config.output_format, p, code, int(its[i]),
                            int(wi[i]), int(wj[i]), int(wv[i]),
                        )
                    )
                    if code == 6:
                        counters["eliminated"] += 1
                    else:
                        raw_candidates.append((p, _STATUS_STRINGS[code]))
            completed.append((int(arr[0]), int(arr[-1]) + 1))
            sink.flush()
            if config.checkpoint_path is not None:
                checkpoint_save(make_state(finished=False), config.checkpoint_path)
            handled += 1
            if progress:
                print(
                    f"chunk {idx + 1}: primes<={int(arr[-1])} "
                    f"eliminated={counters['eliminated']} candidates={len(raw_candidates)}",
                    file=sys.stderr,
                )
            if stop_after_chunks is not None and handled >= stop_after_chunks and pending:
                raise SearchInterrupted(f"stopped after {handled} chunks as requested")
    except BaseException:
        pool.shutdown(wait=False, cancel_futures=True)
        if out is not None:
            sink.close()
        else:
            sink.flush()
        raise
    pool.shutdown()

    # escalate unresolved outcomes: a candidate is never declared socialist
    # without brute-force confirmation, and nothing is silently dropped
    survivors: list[int] = []
    refuted = 0
    for p, status in raw_candidates:
        if p < ORACLE_PRIME_LIMIT:
            verdict = brute_force_socialist(p)
            if verdict.is_socialist and p > 5:
                survivors.append(p)
                print(f"SOCIALIST PRIME CONFIRMED: {p}", file=sys.stderr)
            elif not verdict.is_socialist:
                refuted += 1
                if status == "candidate":
                    print(
                        f"note: collision scan missed a duplicate for p={p}; "
                        f"oracle found {verdict.duplicate}",
                        file=sys.stderr,
                    )
        else:
            survivors.append(p)
            print(f"unresolved-candidate: p={p} ({status})", file=sys.stderr)

    counters["candidates"] = len(raw_candidates)
    report = SearchReport(
        primes_seen=counters["primes_seen"],
        rejected=dict(rejected),
        rs_passed=counters["rs_passed"],
        t_passed=counters["t_passed"] if apply_t else None,
        eliminated=counters["eliminated"],
        candidates=counters["candidates"],
        survivors=survivors,
        refuted_candidates=refuted,
        iterations_mean=stats["iter_sum"] / stats["scanned"] if stats["scanned"] else None,
        iterations_max=stats["iter_max"] if stats["scanned"] else None,
        iterations_mean_ratio=stats["ratio_sum"] / stats["scanned"] if stats["scanned"] else None,
        elapsed_seconds=time.perf_counter() - t0,
    )
    if config.output_format == "jsonl":
        output_bytes += sink.write(
            (json.dumps(report.to_json_dict(), separators=(",", ":")) + "\n").encode()
        )
    if config.checkpoint_path is not None:
        checkpoint_save(make_state(finished=True), config.checkpoint_path)
    if out is not None:
        sink.close()
    else:
        sink.flush()
    return report
