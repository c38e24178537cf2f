"""Brute-force ground truth at desk scale.

Everything here costs O(p) time and O(p) bits of memory, so it is capped at
p < 2**24 (a 2 MB bitmap); above that the collision module is the only
eliminator. The oracle is what turns a collision-scan CANDIDATE into an
actual verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .modmath import jacobi

ORACLE_PRIME_LIMIT = 1 << 24


@dataclass(frozen=True)
class SocialistVerdict:
    """Outcome of full distinctness checking of 2!, 3!, ..., (p-1)! mod p."""

    p: int
    is_socialist: bool
    duplicate: tuple[int, int] | None = None
    missing_residue: int | None = None
    res_r_consistent: bool | None = None


@dataclass(frozen=True)
class QuadrupleDecomposition:
    """Factorial-negation pairing structure over H = {2..p-3} \\ {(p-1)/2}."""

    p: int
    quadruples: list[tuple[int, int, int, int]]
    defect: int | None = None


def brute_force_socialist(p: int) -> SocialistVerdict:
    """Mark every factorial residue in a bitmap; report the first repeat.

    When all residues are distinct the unique missing nonzero residue r is
    located and checked against r == -((p-1)/2)! (mod p); a mismatch would
    falsify that identity and raises instead of being returned quietly.
    The check needs p >= 5 (for p = 3 the field stays None).
    """
    if not 3 <= p < ORACLE_PRIME_LIMIT:
        raise ValueError(f"brute-force verdicts need 3 <= p < 2**24, got {p}")
    words = np.zeros((p + 63) // 64, dtype=np.uint64)
    dup_j, dup_val, missing, half = _kernels.brute_force_scan(p, words)
    if dup_j >= 0:
        i = int(_kernels.first_index_with_factorial(p, dup_val, dup_j))
        if i < 2:
            raise RuntimeError(f"duplicate witness recovery failed for p={p}")
        return SocialistVerdict(p, False, duplicate=(i, int(dup_j)))
    missing = int(missing)
    consistent = None
    if p >= 5:
        consistent = missing == (p - int(half)) % p
        if not consistent:
            raise RuntimeError(
                f"p={p}: factorial residues are distinct but the missing residue "
                f"{missing} is not -((p-1)/2)! == {(p - int(half)) % p} (mod p); "
                "this contradicts the forced-residue identity"
            )
    return SocialistVerdict(p, True, missing_residue=missing, res_r_consistent=consistent)


def quadruple_decomposition(p: int) -> QuadrupleDecomposition:
    """Greedy pairing k -> f(k) with (f(k))! == -k! (mod p) over H.

    A socialist prime would split H into (p-5)/4 quadruples
    {k, f(k), p-1-k, p-1-f(k)}; for every known prime the pairing fails and
    the first unmatched k is reported as the defect. Whenever quadruples do
    form, their members' factorials must share one quadratic character
    (that part holds for every p == 5 mod 8, matched or not); parity and the
    factorial product/sum identities are verified on a complete pairing.
    """
    if p % 8 != 5:
        raise ValueError(f"quadruple structure needs p == 5 (mod 8), got {p}")
    if p >= ORACLE_PRIME_LIMIT:
        raise ValueError(f"quadruple decomposition is desk-bounded below 2**24, got {p}")
    fact = np.zeros(p, dtype=np.int64)
    quads_arr, count, defect = _kernels.quadruple_scan(p, fact)
    quads = [tuple(int(x) for x in quads_arr[i]) for i in range(count)]
    for q in quads:
        symbols = {jacobi(int(fact[x]), p) for x in q}
        if len(symbols) != 1:
            raise RuntimeError(f"p={p}: quadruple {q} mixes quadratic characters")
    if defect < 0:
        if count != (p - 5) // 4:
            raise RuntimeError(f"p={p}: complete pairing with wrong quadruple count {count}")
        for q in quads:
            if len({x % 2 for x in q}) != 1:
                raise RuntimeError(f"p={p}: quadruple {q} mixes parities")
            prod = 1
            total = 0
            for x in q:
                prod = prod * int(fact[x]) % p
                total = (total + int(fact[x])) % p
            if prod != 1 or total != 0:
                raise RuntimeError(
                    f"p={p}: quadruple {q} violates the factorial product/sum identities"
                )
    return QuadrupleDecomposition(p, quads, int(defect) if defect >= 0 else None)


def wilson_identity_check(p: int, k: int) -> bool:
    """(p-k)! * (k-1)! == (-1)**k (mod p) for 1 <= k <= p."""
    if not 1 <= k <= p:
        raise ValueError(f"k must lie in [1, {p}], got {k}")
    if p < _kernels.KERNEL_PRIME_LIMIT:
        a, b = _kernels.fact_mod_pair(p, p - k, k - 1)
        a, b = int(a), int(b)
    else:
        f = 1
        a = 1 if p - k < 2 else 0
        b = 1 if k - 1 < 2 else 0
        for m in range(2, max(p - k, k - 1) + 1):
            f = f * m % p
            if m == p - k:
                a = f
            if m == k - 1:
                b = f
    return a * b % p == (-1) ** k % p
