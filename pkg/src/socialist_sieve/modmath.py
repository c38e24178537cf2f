"""Exact modular arithmetic on word-sized integers.

All values are plain Python ints. Moduli used by the fixed-width kernels
elsewhere in the package must stay below ``MAX_MODULUS`` (2**62) so that
sums like a + b and 2*a never overflow 64 bits; the pure-Python functions
here are exact for arbitrary sizes regardless.
"""

from __future__ import annotations

MAX_MODULUS = 1 << 62

# Deterministic Miller-Rabin base set, valid for every n < 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def mul_mod(a: int, b: int, m: int) -> int:
    """Return (a * b) mod m, exactly, for any operand size."""
    return a * b % m


def pow_mod(a: int, e: int, m: int) -> int:
    """Return a**e mod m by square-and-multiply; e == 0 gives 1 mod m."""
    return pow(a, e, m)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 3.

    Equals the Legendre symbol when n is prime. ``a`` may be negative; it is
    reduced modulo n first (the symbol only depends on a mod n). Returns 0
    iff gcd(a, n) > 1.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"jacobi requires an odd modulus >= 3, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic primality test, correct for all n < 2**64."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sqrt_mod(a: int, p: int) -> int | None:
    """Return the smaller x with x*x == a (mod p), or None if none exists.

    p must be prime. Uses the direct exponentiation formulas for
    p % 4 == 3 and p % 8 == 5, and Tonelli-Shanks for p % 8 == 1.
    """
    a %= p
    if p == 2 or a == 0:
        return a
    if jacobi(a, p) == -1:
        return None
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
    elif p % 8 == 5:
        x = pow(a, (p + 3) // 8, p)
        if x * x % p != a:
            x = x * pow(2, (p - 1) // 4, p) % p
    else:
        x = _tonelli_shanks(a, p)
    return min(x, p - x)


def _tonelli_shanks(a: int, p: int) -> int:
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    c = pow(z, q, p)
    x = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        t2i = t
        i = 0
        for i in range(1, m):
            t2i = t2i * t2i % p
            if t2i == 1:
                break
        b = pow(c, 1 << (m - i - 1), p)
        x = x * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return x
