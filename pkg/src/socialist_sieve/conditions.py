"""Cheap necessary conditions a socialist prime must satisfy.

Three independent screens, ordered by cost:

* congruence screen: p == 5 (mod 8) with (5/p) = -1 and (-23/p) = +1;
* cubic screen: (1957/p) = +1, or (1957/p) = -1 together with
  (4y+25/p) = -1 for every root y of y(y+4)(y+6) == 1 (mod p);
* quarter-factorial screen: (((p-1)/4)! / p) = +1, an O(p) check kept out
  of large-range pipelines.

1957 is the discriminant of the cubic y^3 + 10y^2 + 24y - 1 (the expanded
form of y(y+4)(y+6) - 1), which is why its quadratic character controls the
root count: -1 gives exactly one root, +1 gives zero or three.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .modmath import jacobi, pow_mod, sqrt_mod

MOD8_CLASS = 5
NONRESIDUE_WITNESS = 5
RESIDUE_WITNESS = -23
CUBIC_DISCRIMINANT = 1957  # = 19 * 103; also disc(y^3 + 10y^2 + 24y - 1)
CUBIC_COEFFS = (-1, 24, 10, 1)  # constant..leading term
ROOT_LINEAR_FORM = (25, 4)  # evaluate 4y + 25 at each root

# Direct 0..p-1 scan below this; the scan doubles as the test oracle for
# the polynomial-gcd extraction used above it.
SCAN_LIMIT = 1 << 16


@dataclass
class ConditionReport:
    """Per-prime record of every screen outcome; None = not evaluated."""

    p: int
    passes_mod8: bool | None = None
    legendre_5: int | None = None
    legendre_m23: int | None = None
    legendre_1957: int | None = None
    cubic_roots: list[int] | None = None
    legendre_4y25: list[int] | None = None
    rs_pass: bool | None = None
    t_pass: bool | None = None

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "passes_mod8": self.passes_mod8,
            "legendre_5": self.legendre_5,
            "legendre_m23": self.legendre_m23,
            "legendre_1957": self.legendre_1957,
            "cubic_roots": self.cubic_roots,
            "legendre_4y25": self.legendre_4y25,
            "rs_pass": self.rs_pass,
            "t_pass": self.t_pass,
        }


@dataclass(frozen=True)
class CubicRoots:
    """Distinct roots of y^3 + 10y^2 + 24y - 1 over GF(p), ascending."""

    p: int
    roots: list[int]
    multiplicity_note: bool = False  # set when p divides the discriminant


def rs_filter(p: int) -> ConditionReport:
    """Congruence screen; populates the mod-8 and Legendre fields."""
    if p <= 5:
        raise ValueError(f"the congruence screen is defined for primes > 5, got {p}")
    report = ConditionReport(p)
    report.passes_mod8 = p % 8 == MOD8_CLASS
    report.legendre_5 = jacobi(NONRESIDUE_WITNESS, p)
    report.legendre_m23 = jacobi(RESIDUE_WITNESS, p)
    report.rs_pass = report.passes_mod8 and report.legendre_5 == -1 and report.legendre_m23 == 1
    return report


def _scan_roots(p: int) -> list[int]:
    y = np.arange(p, dtype=np.int64)
    v = (y * (y + 4)) % p * (y + 6) % p
    return [int(r) for r in np.flatnonzero(v == 1 % p)]


def _poly_mul_mod(a: list[int], b: list[int], p: int) -> list[int]:
    # degree <= 2 operands, reduced modulo the fixed monic cubic
    c = [0] * 5
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                c[i + j] = (c[i + j] + ai * bj) % p
    # y^3 = 1 - 24y - 10y^2 ; y^4 = -10 + 241y + 76y^2
    c[0] = (c[0] + c[3] - 10 * c[4]) % p
    c[1] = (c[1] - 24 * c[3] + 241 * c[4]) % p
    c[2] = (c[2] - 10 * c[3] + 76 * c[4]) % p
    return c[:3]


def _poly_pow_y(e: int, p: int) -> list[int]:
    """y^e modulo (y^3 + 10y^2 + 24y - 1, p)."""
    r = [1, 0, 0]
    b = [0, 1, 0]
    while e:
        if e & 1:
            r = _poly_mul_mod(r, b, p)
        b = _poly_mul_mod(b, b, p)
        e >>= 1
    return r


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow_mod(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        off = len(a) - len(b)
        for i, bc in enumerate(b):
            a[off + i] = (a[off + i] - c * bc) % p
        _poly_trim(a)
        if not a:
            break
    return a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(a[:]), _poly_trim(b[:])
    while b:
        a, b = b, _poly_mod(a, b, p)
    inv = pow_mod(a[-1], p - 2, p)
    return [c * inv % p for c in a]


def _quadratic_roots(g: list[int], p: int) -> list[int]:
    # monic y^2 + B y + C
    B, C = g[1], g[0]
    disc = (B * B - 4 * C) % p
    s = sqrt_mod(disc, p)
    if s is None:
        raise RuntimeError(f"quadratic factor without square discriminant mod {p}")
    inv2 = pow_mod(2, p - 2, p)
    return [(-B + s) * inv2 % p, (-B - s) * inv2 % p]


def _gcd_roots(p: int) -> list[int]:
    yp = _poly_pow_y(p, p)
    h = [yp[0], (yp[1] - 1) % p, yp[2]]
    f = [c % p for c in CUBIC_COEFFS]
    if not _poly_trim(h[:]):
        g = [c * pow_mod(f[-1], p - 2, p) % p for c in f]  # all three roots live in GF(p)
    else:
        g = _poly_gcd(f, h, p)
    deg = len(g) - 1
    if deg == 0:
        return []
    if deg == 1:
        return [(-g[0]) % p]
    if deg == 2:
        return _quadratic_roots(g, p)
    # three distinct roots: split off one factor with random shifts
    rng = random.Random(p)
    while True:
        a = rng.randrange(p)
        w = _poly_pow_shifted(a, (p - 1) // 2, g, p)
        w[0] = (w[0] - 1) % p
        w = _poly_trim(w)
        if not w:
            continue
        d = _poly_gcd(g, w, p)
        if 0 < len(d) - 1 < 3:
            other = _poly_quotient(g, d, p)
            roots = []
            for part in (d, other):
                if len(part) - 1 == 1:
                    roots.append((-part[0]) % p)
                else:
                    roots.extend(_quadratic_roots(part, p))
            return roots


def _poly_pow_shifted(a: int, e: int, g: list[int], p: int) -> list[int]:
    """(y + a)^e modulo (g, p) for monic g of degree 3."""
    r = [1, 0, 0]
    b = [a % p, 1, 0]
    while e:
        if e & 1:
            r = _poly_mul_generic(r, b, g, p)
        b = _poly_mul_generic(b, b, g, p)
        e >>= 1
    return r


def _poly_mul_generic(a: list[int], b: list[int], g: list[int], p: int) -> list[int]:
    c = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                c[i + j] = (c[i + j] + ai * bj) % p
    deg_g = len(g) - 1
    for d in range(len(c) - 1, deg_g - 1, -1):
        coef = c[d]
        if coef:
            c[d] = 0
            for t in range(deg_g):
                c[d - deg_g + t] = (c[d - deg_g + t] - coef * g[t]) % p
    out = c[:deg_g]
    while len(out) < 3:
        out.append(0)
    return out


def _poly_quotient(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    db = len(b) - 1
    q = [0] * (len(a) - db)
    inv = pow_mod(b[-1], p - 2, p)
    for d in range(len(a) - 1, db - 1, -1):
        c = a[d] * inv % p
        q[d - db] = c
        if c:
            for i, bc in enumerate(b):
                a[d - db + i] = (a[d - db + i] - c * bc) % p
    return _poly_trim(q) or [0]


def cubic_roots(p: int) -> CubicRoots:
    """All distinct roots of y(y+4)(y+6) == 1 (mod p).

    Direct scan below SCAN_LIMIT and for the two prime divisors of the
    discriminant (where repeated roots appear); polynomial-gcd extraction
    with deterministic per-p splitting randomness otherwise.
    """
    if p <= 3:
        raise ValueError(f"cubic root extraction needs a prime > 3, got {p}")
    note = CUBIC_DISCRIMINANT % p == 0
    if p < SCAN_LIMIT or note:
        roots = _scan_roots(p)
    else:
        roots = sorted(_gcd_roots(p))
    return CubicRoots(p, roots, note)


def t_filter(p: int) -> ConditionReport:
    """Cubic screen; avoids root extraction whenever (1957/p) = +1."""
    if p <= 5:
        raise ValueError(f"the cubic screen is defined for primes > 5, got {p}")
    report = ConditionReport(p)
    j = jacobi(CUBIC_DISCRIMINANT, p)
    report.legendre_1957 = j
    if j == 1:
        report.cubic_roots = []
        report.legendre_4y25 = []
        report.t_pass = True
        return report
    roots = cubic_roots(p).roots
    shift, slope = ROOT_LINEAR_FORM
    symbols = [jacobi(slope * y + shift, p) for y in roots]
    report.cubic_roots = roots
    report.legendre_4y25 = symbols
    report.t_pass = all(s == -1 for s in symbols)
    return report


def quarter_factorial_filter(p: int) -> bool:
    """True iff ((p-1)/4)! is a quadratic residue mod p.

    O(p) work, so it stays out of the default large-range pipeline; the
    derivation behind it needs p == 5 (mod 8), hence the precondition.
    """
    if p % 8 != MOD8_CLASS:
        raise ValueError(f"quarter-factorial screen needs p == 5 (mod 8), got {p}")
    n = (p - 1) // 4
    if p < _kernels.KERNEL_PRIME_LIMIT:
        q = int(_kernels.fact_mod_at(p, n))
    else:
        q = 1
        for k in range(2, n + 1):
            q = q * k % p
    return jacobi(q, p) == 1


def evaluate_conditions(p: int) -> ConditionReport:
    """Both screens merged into one full report (CLI surface)."""
    report = rs_filter(p)
    t = t_filter(p)
    report.legendre_1957 = t.legendre_1957
    report.cubic_roots = t.cubic_roots
    report.legendre_4y25 = t.legendre_4y25
    report.t_pass = t.t_pass
    return report
