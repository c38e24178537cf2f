"""Kurepa left factorials modulo p and the conditions built on them.

The left factorial !n = 0! + 1! + ... + (n-1)! connects to the distinct
factorial-residue question through ((p-1)/2)! == !p - 2 (mod p), which
forces (!p - 2)^2 == -1 (mod p) for any socialist prime. The generalized
sum !^k n raises each factorial to the k-th power before summing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from . import _kernels

# Below this, plain Python beats kernel dispatch overhead.
_KERNEL_MIN = 1 << 16


@dataclass(frozen=True)
class ResidueRecord:
    """One persisted row: r_p = !p mod p."""

    p: int
    r_p: int

    @property
    def kurepa_ok(self) -> bool:
        """True while the record is consistent with Kurepa's conjecture."""
        return self.p == 2 or self.r_p != 0


@dataclass(frozen=True)
class GeneralizedResidue:
    """!^k p mod p for one exponent k."""

    p: int
    k: int
    value: int


def _left_factorial_value(p: int) -> int:
    if _KERNEL_MIN <= p < _kernels.KERNEL_PRIME_LIMIT:
        return int(_kernels.left_factorial(p))
    f = 1 % p
    s = f
    for k in range(1, p):
        f = f * k % p
        s = (s + f) % p
    return s


def left_factorial_mod(p: int) -> ResidueRecord:
    """!p mod p via one running-factorial pass (p-1 multiplications)."""
    return ResidueRecord(p, _left_factorial_value(p))


def left_factorial_table(primes: np.ndarray) -> np.ndarray:
    """r_p for every prime in the array, batched through the compiled kernel."""
    primes = np.ascontiguousarray(primes, dtype=np.int64)
    if primes.size and int(primes.max()) >= _kernels.KERNEL_PRIME_LIMIT:
        raise ValueError("batched residues require all primes < 2**31")
    out = np.empty(primes.shape[0], dtype=np.int64)
    _kernels.left_factorial_many(primes, out)
    return out


def generalized_left_factorial_mod(p: int, ks: Iterable[int]) -> list[GeneralizedResidue]:
    """!^k p mod p for every requested exponent, sharing one factorial pass."""
    kk = sorted(set(int(k) for k in ks))
    if not kk:
        return []
    if kk[0] < 1:
        raise ValueError(f"exponents must be >= 1, got {kk[0]}")
    if _KERNEL_MIN <= p < _kernels.KERNEL_PRIME_LIMIT:
        arr = np.array(kk, dtype=np.int64)
        out = np.empty(len(kk), dtype=np.int64)
        _kernels.generalized_left_factorial(p, arr, out)
        values = [int(v) for v in out]
    else:
        sums = [1 % p] * len(kk)
        f = 1 % p
        for m in range(1, p):
            f = f * m % p
            for j, k in enumerate(kk):
                sums[j] = (sums[j] + pow(f, k, p)) % p
        values = sums
    return [GeneralizedResidue(p, k, v) for k, v in zip(kk, values)]


def lfc_check(p: int) -> bool:
    """(!p - 2)^2 == -1 (mod p); necessary for p socialist, never sufficient."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"lfc_check needs an odd prime, got {p}")
    r = _left_factorial_value(p)
    return ((r - 2) ** 2 + 1) % p == 0


def lfck_check(p: int, k: int) -> bool:
    """Generalized branch-by-exponent condition on !^k p mod p.

    k odd: (!^k p - 2)^2 == -1; k == 0 (mod 4): !^k p == 1;
    k == 2 (mod 4): !^k p == 3. The power-sum identity behind the
    derivation needs 1 <= k <= p-2, so other exponents are rejected.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError(f"lfck_check needs an odd prime, got {p}")
    if not 1 <= k <= p - 2:
        raise ValueError(f"exponent must lie in [1, {p - 2}], got {k}")
    v = generalized_left_factorial_mod(p, [k])[0].value
    if k % 2 == 1:
        return ((v - 2) ** 2 + 1) % p == 0
    if k % 4 == 0:
        return v == 1 % p
    return v == 3 % p


def lfc_passing_below(limit: int) -> list[int]:
    """All odd primes p < limit with lfc_check true, via the batched kernel."""
    from .primegen import sieve_array

    primes = sieve_array(limit)
    primes = primes[primes > 2]
    r = left_factorial_table(primes)
    mask = ((r - 2) ** 2 + 1) % primes == 0
    return [int(p) for p in primes[mask]]


def kurepa_violations(limit: int) -> list[int]:
    """Primes 2 < p < limit with p | !p — empty as far as anyone has looked."""
    from .primegen import sieve_array

    primes = sieve_array(limit)
    primes = primes[primes > 2]
    r = left_factorial_table(primes)
    return [int(p) for p in primes[r == 0]]


# --- residue table persistence -------------------------------------------
#
# Plain CSV for auditability: UTF-8, Unix newlines, header "p,r_p", decimal
# values, rows strictly increasing in p.

_HEADER = "p,r_p"


def _validate_records(records: list[ResidueRecord]) -> None:
    last = -1
    for rec in records:
        if rec.p <= last:
            raise ValueError(f"records must be strictly increasing in p, got {rec.p} after {last}")
        if not 0 <= rec.r_p < rec.p:
            raise ValueError(f"residue out of range: p={rec.p}, r_p={rec.r_p}")
        last = rec.p


def residue_table_write(records: Iterable[ResidueRecord], destination: str | os.PathLike | IO[str]) -> None:
    """Write records as CSV; rows must be sorted by p with no duplicates."""
    recs = list(records)
    _validate_records(recs)
    lines = [_HEADER] + [f"{r.p},{r.r_p}" for r in recs]
    body = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(body)
    else:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(body)


def residue_table_read(source: str | os.PathLike | IO[str]) -> list[ResidueRecord]:
    """Read a residue CSV back, rejecting malformed or out-of-order rows."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != _HEADER:
        raise ValueError(f"expected header {_HEADER!r}")
    records = []
    last = -1
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2 or not parts[0].isdigit() or not parts[1].isdigit():
            raise ValueError(f"malformed row at line {i}: {line!r}")
        p, r = int(parts[0]), int(parts[1])
        if p <= last:
            raise ValueError(f"rows must be strictly increasing in p (line {i})")
        if r >= p:
            raise ValueError(f"r_p must be < p (line {i}: p={p}, r_p={r})")
        records.append(ResidueRecord(p, r))
        last = p
    return records
