"""Log-space probability model for the existence of socialist primes.

Treating 2!, ..., (p-1)! mod p as random nonzero values that never repeat
consecutively gives the per-prime probability

    W_p = (p-2)! / (p-2)**(p-3),

which underflows any fixed-width float beyond p ~ 700, so everything here
is carried as natural logarithms and converted to decimal logs only for
reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .primegen import PrimeRange, primes_in_range

# Exact log-sum below this; lgamma above (they agree to ~1e-12 at the seam).
_LOGSUM_LIMIT = 10_000

INTERVAL_LIMIT = 10**6


@dataclass(frozen=True)
class HeuristicEstimate:
    kind: str  # exact_wp | wp_bound | interval_sum | tail_bound
    p_or_a: float
    ln_value: float

    @property
    def log10_value(self) -> float:
        return self.ln_value / math.log(10)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "argument": self.p_or_a,
            "ln_value": self.ln_value,
            "log10_value": self.log10_value,
        }


def _ln_factorial(n: int) -> float:
    if n < _LOGSUM_LIMIT:
        return math.fsum(math.log(k) for k in range(2, n + 1))
    return math.lgamma(n + 1)


def ln_wp(p: int) -> HeuristicEstimate:
    """ln W_p = ln((p-2)!) - (p-3) ln(p-2), exact to ~1e-12 relative."""
    if p < 5:
        raise ValueError(f"W_p is defined for p >= 5, got {p}")
    value = _ln_factorial(p - 2) - (p - 3) * math.log(p - 2)
    return HeuristicEstimate("exact_wp", p, value)


def wp_upper_bound(p: int) -> HeuristicEstimate:
    """ln of the closed-form bound W_p <= (p-2)**1.5 * e**(3-p)."""
    if p < 5:
        raise ValueError(f"the W_p bound is defined for p >= 5, got {p}")
    value = 1.5 * math.log(p - 2) + (3 - p)
    return HeuristicEstimate("wp_bound", p, value)


def interval_sum_wp(a: int, b: int) -> HeuristicEstimate:
    """log-sum-exp of ln W_p over the primes in [a, b)."""
    if not 5 <= a < b <= INTERVAL_LIMIT:
        raise ValueError(f"interval must satisfy 5 <= a < b <= 10**6, got [{a}, {b})")
    lns = [ln_wp(p).ln_value for p in primes_in_range(PrimeRange(a, b))]
    if not lns:
        value = -math.inf
    else:
        value = float(np.logaddexp.reduce(np.array(lns, dtype=np.float64)))
    return HeuristicEstimate("interval_sum", a, value)


def tail_bound(a: float) -> HeuristicEstimate:
    """ln of e**3 * a**(1.5 - a) * sqrt(ln a): expected socialist primes > a."""
    if a < 5:
        raise ValueError(f"the tail bound is defined for a >= 5, got {a}")
    value = 3 + (1.5 - a) * math.log(a) + 0.5 * math.log(math.log(a))
    return HeuristicEstimate("tail_bound", a, value)
