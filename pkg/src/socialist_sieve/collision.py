"""Birthday-attack elimination of socialist prime candidates.

Streaming k! mod p for k = 2, 3, ... produces near-uniform nonzero values,
so a duplicate is expected after about sqrt(p*pi/2) steps. Values go into a
fixed-size hash table with no collision resolution: a busy slot is simply
overwritten, which can delay detection but never fakes one, because a hit
requires the stored value to equal the incoming value exactly. Two Wilson
shortcuts make the scan exit early whenever k! hits 1 or p-1 ahead of the
indices where those values are guaranteed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import HASH_MIX, KERNEL_PRIME_LIMIT, collision_scan

MIN_TABLE_BITS = 10
MAX_TABLE_BITS = 28
DEFAULT_TABLE_BITS = 19

_GENERATION_LIMIT = (1 << 32) - 1
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class CollisionConfig:
    """Scan parameters: table size 2**table_bits, optional witnesses and cap."""

    table_bits: int = DEFAULT_TABLE_BITS
    witness_mode: bool = False
    max_iterations: int | None = None

    def __post_init__(self) -> None:
        if not MIN_TABLE_BITS <= self.table_bits <= MAX_TABLE_BITS:
            raise ValueError(
                f"table_bits must lie in [{MIN_TABLE_BITS}, {MAX_TABLE_BITS}], got {self.table_bits}"
            )
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive when set")


class CollisionStatus(str, Enum):
    ELIMINATED = "eliminated"
    CANDIDATE = "candidate"
    ITERATION_CAP_REACHED = "iteration_cap"


@dataclass(frozen=True)
class CollisionOutcome:
    """Scan result; a witness (i, j, value) satisfies i! == j! == value mod p."""

    p: int
    status: CollisionStatus
    iterations: int
    witness: tuple[int, int, int] | None = None


class CollisionTable:
    """One reusable scan table; exactly one scan owns it at a time.

    Slots are claimed by generation number so reuse across primes costs one
    counter bump instead of zeroing 2**table_bits entries.
    """

    def __init__(self, table_bits: int = DEFAULT_TABLE_BITS, witness_mode: bool = False):
        self.table_bits = table_bits
        self.witness_mode = witness_mode
        size = 1 << table_bits
        self.values = np.zeros(size, dtype=np.uint64)
        self.gens = np.zeros(size, dtype=np.uint32)
        self.idxs = np.zeros(size if witness_mode else 1, dtype=np.int64)
        self.generation = 0

    def reserve_generations(self, n: int) -> int:
        """Claim n fresh generations; returns the value before the first."""
        if self.generation + n >= _GENERATION_LIMIT:
            self.gens[:] = 0
            self.generation = 0
        start = self.generation
        self.generation += n
        return start


def expected_iterations(p: int) -> float:
    """Birthday estimate sqrt(p * pi / 2) for the first duplicate."""
    if p < 2:
        raise ValueError(f"expected_iterations needs p >= 2, got {p}")
    return math.sqrt(p * math.pi / 2)


def _scan_python(p: int, table: CollisionTable, gen: int, max_iter: int) -> tuple[int, int, int, int, int]:
    # Mirrors the compiled kernel for p >= 2**31; Python ints are exact.
    values, gens, idxs = table.values, table.gens, table.idxs
    store_idx = table.witness_mode
    shift = 64 - table.table_bits
    mix = int(HASH_MIX)
    f = 1
    its = 0
    for k in range(2, p):
        f = f * k % p
        its += 1
        if f == 1 and k < p - 2:
            return 1, its, k, p - 2, 1
        if f == p - 1 and k < p - 1:
            return 1, its, k, p - 1, p - 1
        h = (f * mix & _MASK64) >> shift
        if int(gens[h]) == gen and int(values[h]) == f:
            wi = int(idxs[h]) if store_idx else -1
            return 1, its, wi, k, f
        values[h] = f
        gens[h] = gen
        if store_idx:
            idxs[h] = k
        if its == max_iter and k < p - 1:
            return 2, its, -1, -1, -1
    return 0, its, -1, -1, -1


def find_duplicate(
    p: int,
    config: CollisionConfig | None = None,
    table: CollisionTable | None = None,
) -> CollisionOutcome:
    """Scan k! mod p for a repeated residue; p is eliminated on any hit.

    Reaching k = p-1 without a hit yields CANDIDATE, which callers escalate
    to the brute-force oracle (overwrites can hide duplicates, so CANDIDATE
    is never a socialist certificate by itself). A supplied table must match
    the config's table_bits and witness_mode.
    """
    if config is None:
        config = CollisionConfig()
    if p < 5:
        raise ValueError(f"collision scan is defined for primes >= 5, got {p}")
    if table is None:
        table = CollisionTable(config.table_bits, config.witness_mode)
    elif table.table_bits != config.table_bits or table.witness_mode != config.witness_mode:
        raise ValueError("collision table does not match the configuration")
    gen = table.reserve_generations(1) + 1
    cap = config.max_iterations or 0
    if p < KERNEL_PRIME_LIMIT:
        st, its, wi, wj, wv = collision_scan(
            p, table.table_bits, table.values, table.gens, table.idxs,
            gen, table.witness_mode, cap,
        )
    else:
        st, its, wi, wj, wv = _scan_python(p, table, gen, cap)
    if st == 1:
        status = CollisionStatus.ELIMINATED
    elif st == 0:
        status = CollisionStatus.CANDIDATE
    else:
        status = CollisionStatus.ITERATION_CAP_REACHED
    witness = None
    if status is CollisionStatus.ELIMINATED and wi >= 0:
        witness = (int(wi), int(wj), int(wv))
    return CollisionOutcome(p, status, int(its), witness)
