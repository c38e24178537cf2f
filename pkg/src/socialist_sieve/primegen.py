"""Segmented prime enumeration over 64-bit ranges.

A classic odd-only segmented sieve: base primes up to sqrt(hi) are computed
once, then fixed-size windows are sieved with numpy strided clears. Memory
stays O(segment_size + sqrt(hi)) no matter how large the range is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .modmath import MAX_MODULUS

# Integers per window; the odd-only bitmap for a window is segment_size/2
# bytes, well inside typical L2/L3 budgets.
DEFAULT_SEGMENT_SIZE = 1 << 20

MIN_SEGMENT_SIZE = 1 << 10


@dataclass(frozen=True)
class PrimeRange:
    """Half-open integer range [lo, hi) to enumerate primes from."""

    lo: int
    hi: int
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self) -> None:
        if self.lo < 0 or self.lo > self.hi:
            raise ValueError(f"need 0 <= lo <= hi, got [{self.lo}, {self.hi})")
        if self.hi > MAX_MODULUS:
            raise ValueError(f"hi must be <= 2**62, got {self.hi}")
        if self.segment_size < MIN_SEGMENT_SIZE:
            raise ValueError(f"segment_size must be >= {MIN_SEGMENT_SIZE}")


def sieve_array(limit: int) -> np.ndarray:
    """All primes < limit as an int64 array (simple in-memory sieve)."""
    if limit <= 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def segment_prime_arrays(rng: PrimeRange) -> Iterator[np.ndarray]:
    """Yield primes in [lo, hi) as increasing int64 arrays, one per segment."""
    lo, hi = rng.lo, rng.hi
    if hi <= 2 or lo >= hi:
        return
    base = sieve_array(math.isqrt(hi - 1) + 1)
    odd_base = [int(p) for p in base if p > 2]
    if lo <= 2:
        yield np.array([2], dtype=np.int64)
    low = max(lo, 3)
    if low % 2 == 0:
        low += 1
    while low < hi:
        high = min(low + rng.segment_size, hi)
        n_odd = (high - low + 1) // 2
        mask = np.ones(n_odd, dtype=bool)
        for p in odd_base:
            start = p * p
            if start >= high:
                break
            if start < low:
                start = ((low + p - 1) // p) * p
                if start % 2 == 0:
                    start += p
            if start < high:
                mask[(start - low) // 2 :: p] = False
        if mask.any():
            yield low + 2 * np.flatnonzero(mask).astype(np.int64)
        low = high


def primes_in_range(rng: PrimeRange) -> Iterator[int]:
    """Yield every prime in [lo, hi) exactly once, in increasing order."""
    for arr in segment_prime_arrays(rng):
        yield from map(int, arr)


def primes_5_mod_8(rng: PrimeRange) -> Iterator[int]:
    """Yield the primes p in [lo, hi) with p % 8 == 5, in increasing order."""
    for arr in segment_prime_arrays(rng):
        sel = arr[(arr & 7) == 5]
        yield from map(int, sel)
