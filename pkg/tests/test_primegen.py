import numpy as np
import pytest

from socialist_sieve.modmath import is_prime
from socialist_sieve.primegen import (
    MIN_SEGMENT_SIZE,
    PrimeRange,
    primes_5_mod_8,
    primes_in_range,
    sieve_array,
)
from tests.conftest import naive_sieve


class TestPrimeRange:
    def test_rejects_too_large(self):
        with pytest.raises(ValueError):
            PrimeRange(2, (1 << 62) + 1)

    def test_rejects_inverted(self):
        with pytest.raises(ValueError):
            PrimeRange(10, 5)

    def test_rejects_tiny_segment(self):
        with pytest.raises(ValueError):
            PrimeRange(2, 100, segment_size=MIN_SEGMENT_SIZE - 1)

    def test_empty_range_allowed(self):
        assert list(primes_in_range(PrimeRange(2, 2))) == []


class TestPrimesInRange:
    def test_small_window(self):
        assert list(primes_in_range(PrimeRange(10, 20))) == [11, 13, 17, 19]

    def test_includes_two(self):
        assert list(primes_in_range(PrimeRange(0, 10))) == [2, 3, 5, 7]

    def test_count_to_1e6(self, primes_1e6):
        got = np.fromiter(primes_in_range(PrimeRange(2, 10**6)), dtype=np.int64)
        assert got.shape[0] == 78498
        assert np.array_equal(got, primes_1e6)

    @pytest.mark.parametrize("segment_size", [1 << 10, 1 << 14, 1 << 20])
    def test_segmentation_invariance(self, segment_size, primes_1e6):
        got = np.fromiter(
            primes_in_range(PrimeRange(2, 10**6, segment_size=segment_size)), dtype=np.int64
        )
        assert np.array_equal(got, primes_1e6)

    @pytest.mark.parametrize("b", [50_020, 50_023])
    def test_concatenation(self, b):
        a, c = 1_000, 120_000
        left = list(primes_in_range(PrimeRange(a, b)))
        right = list(primes_in_range(PrimeRange(b, c)))
        assert left + right == list(primes_in_range(PrimeRange(a, c)))

    def test_mid_range_window_matches_naive(self):
        lo, hi = 999_000, 1_000_000
        ref = [int(p) for p in naive_sieve(hi) if p >= lo]
        assert list(primes_in_range(PrimeRange(lo, hi))) == ref

    def test_every_value_is_prime(self):
        for p in primes_in_range(PrimeRange(10**7, 10**7 + 2000)):
            assert is_prime(p)


class TestPrimes5Mod8:
    def test_small_window(self):
        assert list(primes_5_mod_8(PrimeRange(2, 100))) == [5, 13, 29, 37, 53, 61]

    def test_empty(self):
        assert list(primes_5_mod_8(PrimeRange(2, 5))) == []

    def test_count_to_1e6(self, primes_1e6):
        expected = int(((primes_1e6 & 7) == 5).sum())
        got = sum(1 for _ in primes_5_mod_8(PrimeRange(2, 10**6)))
        assert got == expected
        # Dirichlet: one quarter of pi(10^6) to within 1%
        assert abs(got - 78498 / 4) < 0.01 * 78498

    def test_all_congruent(self):
        for p in primes_5_mod_8(PrimeRange(2, 20_000)):
            assert p % 8 == 5


def test_sieve_array_matches_naive():
    assert np.array_equal(sieve_array(100_000), naive_sieve(100_000))
