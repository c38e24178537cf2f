"""Shared fixtures: independent sieve oracle and session-scoped heavy runs."""

from __future__ import annotations

import math

import numpy as np
import pytest

from socialist_sieve.collision import CollisionConfig, CollisionTable, find_duplicate
from socialist_sieve.oracle import brute_force_socialist


def naive_sieve(limit: int) -> np.ndarray:
    """Independent simple sieve used as the reference in tests."""
    flags = np.ones(limit, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


@pytest.fixture(scope="session")
def primes_1e4() -> np.ndarray:
    return naive_sieve(10_000)


@pytest.fixture(scope="session")
def primes_1e5() -> np.ndarray:
    return naive_sieve(100_000)


@pytest.fixture(scope="session")
def primes_1e6() -> np.ndarray:
    return naive_sieve(1_000_000)


@pytest.fixture(scope="session")
def oracle_collision_agreement(primes_1e4):
    """For every prime in (5, 10^4]: brute-force verdict plus collision
    outcomes at table sizes 2^12, 2^16, 2^19 (witness mode on)."""
    results = {}
    tables = {bits: CollisionTable(bits, witness_mode=True) for bits in (12, 16, 19)}
    for p in primes_1e4:
        p = int(p)
        if p <= 5:
            continue
        verdict = brute_force_socialist(p)
        outcomes = {
            bits: find_duplicate(p, CollisionConfig(table_bits=bits, witness_mode=True), tables[bits])
            for bits in (12, 16, 19)
        }
        results[p] = (verdict, outcomes)
    return results
