"""Numba-compiled hot loops shared by the factorial, oracle and search modules.

Every kernel here requires its modulus to be below ``KERNEL_PRIME_LIMIT``
(2**31): residues then fit in 31 bits, so a product of two residues fits in
62 bits and plain uint64 arithmetic is exact. Callers dispatch to the exact
pure-Python implementations above that limit.

Status codes produced by ``filter_chunk`` (one per examined prime):

====  =========================================
code  meaning
====  =========================================
0     rejected: p % 8 != 5
1     rejected: (5/p) != -1
2     rejected: (-23/p) != +1
3     rejected: cubic residue condition
4     rejected: quarter-factorial condition
5     rejected: left-factorial square condition
6     collision scan eliminated p
7     collision scan completed: candidate
8     collision scan hit the iteration cap
99    internal error (unexpected cubic shape)
====  =========================================
"""

from __future__ import annotations

import os

# Pick a threading layer numba always has before it probes for TBB (whose
# probe warns on older system libraries); respects any user override.
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

import numpy as np
from numba import njit, prange

KERNEL_PRIME_LIMIT = 1 << 31

# Multiplicative mixer for hash slots (odd 64-bit constant, golden-ratio
# based); factorial residues are near-uniform already, the mixer just guards
# against structured slot patterns at no measurable cost.
HASH_MIX = np.uint64(0x9E3779B97F4A7C15)

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True, nogil=True)
def jacobi_u(a, n):
    """Jacobi symbol (a/n) for odd n >= 3; int64 in, int64 out."""
    a = a % n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a = a % n
    if n == 1:
        return result
    return 0


@njit(cache=True, nogil=True)
def pow_mod_u(a, e, p):
    """a**e mod p for 0 < p < 2**31."""
    up = np.uint64(p)
    base = np.uint64(a % p)
    result = _ONE % up
    while e > 0:
        if e & 1:
            result = result * base % up
        base = base * base % up
        e >>= 1
    return np.int64(result)


@njit(cache=True, nogil=True)
def fact_mod_at(p, n):
    """n! mod p for 0 <= n < p < 2**31."""
    up = np.uint64(p)
    f = _ONE
    for k in range(2, n + 1):
        f = f * np.uint64(k) % up
    return np.int64(f % up)


@njit(cache=True, nogil=True)
def fact_mod_pair(p, n1, n2):
    """(n1! mod p, n2! mod p) in a single pass to max(n1, n2)."""
    up = np.uint64(p)
    f = _ONE % up
    r1 = f if n1 < 2 else _ZERO
    r2 = f if n2 < 2 else _ZERO
    top = n1 if n1 > n2 else n2
    for k in range(2, top + 1):
        f = f * np.uint64(k) % up
        if k == n1:
            r1 = f
        if k == n2:
            r2 = f
    return np.int64(r1), np.int64(r2)


@njit(cache=True, nogil=True)
def left_factorial(p):
    """!p mod p = (0! + 1! + ... + (p-1)!) mod p, single running pass."""
    up = np.uint64(p)
    f = _ONE % up
    s = f
    for k in range(1, p):
        f = f * np.uint64(k) % up
        s = (s + f) % up
    return np.int64(s)


@njit(cache=True, nogil=True, parallel=True)
def left_factorial_many(primes, out):
    """out[i] = !p_i mod p_i for each prime in the input array."""
    for i in prange(primes.shape[0]):
        out[i] = left_factorial(primes[i])


@njit(cache=True, nogil=True)
def generalized_left_factorial(p, ks, out):
    """out[j] = sum of (m!)**ks[j] for m = 0..p-1, all mod p, one pass."""
    up = np.uint64(p)
    for j in range(ks.shape[0]):
        out[j] = np.int64(_ONE % up)
    f = _ONE % up
    for m in range(1, p):
        f = f * np.uint64(m) % up
        for j in range(ks.shape[0]):
            t = np.uint64(pow_mod_u(np.int64(f), ks[j], p))
            out[j] = np.int64((np.uint64(out[j]) + t) % up)


@njit(cache=True, nogil=True)
def collision_scan(p, table_bits, values, gens, idxs, gen, store_idx, max_iter):
    """Birthday scan of k! mod p through a fixed-size overwrite-only table.

    Returns (status, iterations, wi, wj, wvalue) with status 1 = eliminated,
    0 = candidate (scan reached k = p-1), 2 = iteration cap. Slots are
    claimed by generation number, so tables are reused across primes without
    zeroing. A witness (wi, wj, wvalue) satisfies wi! == wj! == wvalue mod p;
    wi is -1 for table hits when store_idx is off.
    """
    up = np.uint64(p)
    shift = np.uint64(64 - table_bits)
    f = _ONE
    its = np.int64(0)
    for k in range(2, p):
        f = f * np.uint64(k) % up
        its += 1
        # Wilson early exits: (p-2)! == 1 and (p-1)! == p-1 are guaranteed,
        # so seeing either value sooner is a certain duplicate.
        if f == _ONE and k < p - 2:
            return 1, its, np.int64(k), np.int64(p - 2), np.int64(1)
        if f == up - _ONE and k < p - 1:
            return 1, its, np.int64(k), np.int64(p - 1), np.int64(p - 1)
        h = (f * HASH_MIX) >> shift
        if gens[h] == gen and values[h] == f:
            if store_idx:
                return 1, its, np.int64(idxs[h]), np.int64(k), np.int64(f)
            return 1, its, np.int64(-1), np.int64(k), np.int64(f)
        values[h] = f
        gens[h] = gen
        if store_idx:
            idxs[h] = k
        if its == max_iter and k < p - 1:
            return 2, its, np.int64(-1), np.int64(-1), np.int64(-1)
    return 0, its, np.int64(-1), np.int64(-1), np.int64(-1)


@njit(cache=True, nogil=True)
def first_index_with_factorial(p, value, before):
    """Smallest k >= 2 with k! == value (mod p) and k < before, else -1."""
    up = np.uint64(p)
    uv = np.uint64(value)
    f = _ONE
    for k in range(2, before):
        f = f * np.uint64(k) % up
        if f == uv:
            return np.int64(k)
    return np.int64(-1)


@njit(cache=True, nogil=True)
def brute_force_scan(p, words):
    """Mark k! mod p for k = 2..p-1 in a bitmap; stop at the first repeat.

    Returns (dup_j, dup_value, missing, half_fact): dup_j = -1 when all
    residues are distinct, in which case missing is the unique nonzero
    unmarked residue and half_fact = ((p-1)/2)! mod p captured during the
    pass. On a repeat, missing and half_fact are -1.
    """
    up = np.uint64(p)
    mid = (p - 1) // 2
    half = np.int64(1) if mid < 2 else np.int64(-1)
    f = _ONE
    for k in range(2, p):
        f = f * np.uint64(k) % up
        if k == mid:
            half = np.int64(f)
        w = f >> np.uint64(6)
        b = f & np.uint64(63)
        if (words[w] >> b) & _ONE:
            return np.int64(k), np.int64(f), np.int64(-1), np.int64(-1)
        words[w] |= _ONE << b
    missing = np.int64(-1)
    for v in range(1, p):
        uv = np.uint64(v)
        if (words[uv >> np.uint64(6)] >> (uv & np.uint64(63))) & _ONE == _ZERO:
            missing = np.int64(v)
            break
    return np.int64(-1), np.int64(-1), missing, half


@njit(cache=True, nogil=True)
def _poly_mul_mod_cubic(a0, a1, a2, b0, b1, b2, up, r3_0, r3_1, r3_2, r4_0, r4_1, r4_2):
    """Product of two degree<=2 polynomials modulo y^3 + 10y^2 + 24y - 1.

    r3_* and r4_* are the reductions of y^3 and y^4 to degree <= 2, already
    taken mod p by the caller.
    """
    c0 = a0 * b0 % up
    c1 = (a0 * b1 % up + a1 * b0 % up) % up
    c2 = (a0 * b2 % up + a1 * b1 % up + a2 * b0 % up) % up
    c3 = (a1 * b2 % up + a2 * b1 % up) % up
    c4 = a2 * b2 % up
    d0 = (c0 + c3 * r3_0 % up + c4 * r4_0 % up) % up
    d1 = (c1 + c3 * r3_1 % up + c4 * r4_1 % up) % up
    d2 = (c2 + c3 * r3_2 % up + c4 * r4_2 % up) % up
    return d0, d1, d2


@njit(cache=True, nogil=True)
def _poly_deg4(c):
    for d in range(3, -1, -1):
        if c[d] != _ZERO:
            return d
    return -1


@njit(cache=True, nogil=True)
def cubic_root_5mod8(p):
    """Unique root of y^3 + 10y^2 + 24y - 1 mod p when (1957/p) = -1.

    Computes gcd(y^p - y, f) by polynomial exponentiation modulo f; the gcd
    is linear exactly when the cubic has one root. Returns -1 if the gcd
    degree is unexpected (caller treats that as an internal error).
    """
    up = np.uint64(p)
    # y^3 = 1 - 24y - 10y^2 and y^4 = -10 + 241y + 76y^2 modulo f.
    r3_0 = _ONE % up
    r3_1 = np.uint64((-24) % p)
    r3_2 = np.uint64((-10) % p)
    r4_0 = np.uint64((-10) % p)
    r4_1 = np.uint64(241 % p)
    r4_2 = np.uint64(76 % p)
    # y^p mod f by square-and-multiply.
    s0, s1, s2 = _ONE % up, _ZERO, _ZERO
    b0, b1, b2 = _ZERO, _ONE % up, _ZERO
    e = p
    while e > 0:
        if e & 1:
            s0, s1, s2 = _poly_mul_mod_cubic(
                s0, s1, s2, b0, b1, b2, up, r3_0, r3_1, r3_2, r4_0, r4_1, r4_2
            )
        b0, b1, b2 = _poly_mul_mod_cubic(
            b0, b1, b2, b0, b1, b2, up, r3_0, r3_1, r3_2, r4_0, r4_1, r4_2
        )
        e >>= 1
    A = np.zeros(4, dtype=np.uint64)
    B = np.zeros(4, dtype=np.uint64)
    A[0] = np.uint64((-1) % p)
    A[1] = np.uint64(24 % p)
    A[2] = np.uint64(10 % p)
    A[3] = _ONE % up
    B[0] = s0
    B[1] = (s1 + up - _ONE % up) % up
    B[2] = s2
    while True:
        db = _poly_deg4(B)
        if db < 0:
            break
        inv = np.uint64(pow_mod_u(np.int64(B[db]), p - 2, p))
        da = _poly_deg4(A)
        while da >= db:
            c = A[da] * inv % up
            shift = da - db
            for t in range(db + 1):
                A[shift + t] = (A[shift + t] + up - c * B[t] % up) % up
            da = _poly_deg4(A)
        tmp = A
        A = B
        B = tmp
    if _poly_deg4(A) != 1:
        return np.int64(-1)
    inv = np.uint64(pow_mod_u(np.int64(A[1]), p - 2, p))
    root = (up - A[0]) % up * inv % up
    return np.int64(root)


@njit(cache=True, nogil=True)
def quadruple_scan(p, fact):
    """Greedy factorial-negation pairing over H = {2..p-3} minus (p-1)/2.

    For each unused k in ascending order, picks the smallest unused partner
    j in H with j! == -k! (mod p), skipping the degenerate j == p-1-k, and
    claims the quadruple (k, j, p-1-k, p-1-j). Quadruples are closed under
    x -> p-1-x, so the two reflected members are always unused when k is.
    Returns (quads, count, defect): defect is the first k whose partner
    search fails, -1 when the pairing covers all of H.
    """
    mid = (p - 1) // 2
    head = np.full(p, -1, dtype=np.int32)
    nxt = np.full(p, -1, dtype=np.int32)
    f = _ONE % np.uint64(p)
    up = np.uint64(p)
    fact[0] = np.int64(f)
    for k in range(1, p):
        f = f * np.uint64(k) % up
        fact[k] = np.int64(f)
    for k in range(p - 3, 1, -1):
        if k == mid:
            continue
        v = fact[k]
        nxt[k] = head[v]
        head[v] = k
    n_quads = (p - 5) // 4 if p >= 5 else 0
    quads = np.zeros((n_quads, 4), dtype=np.int64)
    used = np.zeros(p, dtype=np.uint8)
    count = 0
    defect = np.int64(-1)
    for k in range(2, p - 2):
        if k == mid or used[k]:
            continue
        target = p - fact[k]
        r1 = p - 1 - k
        j = head[target]
        while j != -1 and (used[j] == 1 or j == r1):
            j = nxt[j]
        if j == -1:
            defect = np.int64(k)
            break
        r2 = p - 1 - j
        used[k] = 1
        used[j] = 1
        used[r1] = 1
        used[r2] = 1
        quads[count, 0] = k
        quads[count, 1] = j
        quads[count, 2] = r1
        quads[count, 3] = r2
        count += 1
    return quads, count, defect


@njit(cache=True, nogil=True)
def filter_chunk(
    primes,
    apply_t,
    apply_qf,
    apply_lfc,
    table_bits,
    values,
    gens,
    idxs,
    gen0,
    store_idx,
    max_iter,
    status,
    its,
    wi,
    wj,
    wv,
):
    """Run the full filter pipeline over a chunk of primes.

    Fills the output arrays with the per-prime status code (see module
    docstring), iteration counts and witnesses, and returns the last table
    generation used. The caller guarantees gen0 + len(primes) fits in the
    uint32 generation array.
    """
    gen = gen0
    for i in range(primes.shape[0]):
        p = primes[i]
        its[i] = 0
        wi[i] = -1
        wj[i] = -1
        wv[i] = -1
        if p & 7 != 5:
            status[i] = 0
            continue
        if jacobi_u(np.int64(5), p) != -1:
            status[i] = 1
            continue
        if jacobi_u(np.int64(-23), p) != 1:
            status[i] = 2
            continue
        if apply_t:
            jt = jacobi_u(np.int64(1957), p)
            if jt == -1:
                y = cubic_root_5mod8(p)
                if y < 0:
                    status[i] = 99
                    continue
                if jacobi_u(4 * y + 25, p) != -1:
                    status[i] = 3
                    continue
        if apply_qf:
            q = fact_mod_at(p, (p - 1) // 4)
            if jacobi_u(q, p) != 1:
                status[i] = 4
                continue
        if apply_lfc:
            r = left_factorial(p)
            d = (r - 2) % p
            if (d * d + 1) % p != 0:
                status[i] = 5
                continue
        gen += 1
        st, n, a, b, v = collision_scan(
            p, table_bits, values, gens, idxs, gen, store_idx, max_iter
        )
        its[i] = n
        wi[i] = a
        wj[i] = b
        wv[i] = v
        if st == 1:
            status[i] = 6
        elif st == 0:
            status[i] = 7
        else:
            status[i] = 8
    return gen
