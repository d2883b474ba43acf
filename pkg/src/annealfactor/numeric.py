"""Exact integer primitives: bit views, popcount, trial division, primality.

Arbitrary-precision values are plain Python ints throughout the package;
they already give exact multiplication at any size.
"""

from __future__ import annotations

import random
from dataclasses import dataclass


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [p for p in range(limit + 1) if flags[p]]


#: The 168 primes up to 1000, the fixed trial-division table.
SMALL_PRIMES: tuple[int, ...] = tuple(_sieve(1000))

#: Smallest prime that survives trial division; factors found by annealing
#: therefore always have at least MIN_FACTOR_BITS binary digits.
MIN_FACTOR = 1009
MIN_FACTOR_BITS = 10


@dataclass(frozen=True)
class BitView:
    """Binary digits of a positive integer, least-significant digit first.

    ``digit(i)`` uses 1-based indexing (i = 1 is the least significant digit,
    i = length the leading 1), matching how the energy weights are indexed.
    """

    bits: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.bits)

    def digit(self, i: int) -> int:
        if not 1 <= i <= len(self.bits):
            raise IndexError(f"digit index {i} out of range 1..{len(self.bits)}")
        return self.bits[i - 1]

    def value(self) -> int:
        result = 0
        for bit in reversed(self.bits):
            result = (result << 1) | bit
        return result


def to_bit_view(x: int) -> BitView:
    """Binary digit sequence of x >= 1; the top digit is always 1."""
    if x < 1:
        raise ValueError("bit view requires a positive integer (no leading-1 form for 0)")
    return BitView(tuple((x >> k) & 1 for k in range(x.bit_length())))


def popcount(x: int) -> int:
    """Number of 1 digits in the binary representation of x >= 0."""
    if x < 0:
        raise ValueError("popcount requires a non-negative integer")
    return x.bit_count()


def multiply(a: int, b: int) -> int:
    """Exact product at arbitrary precision."""
    return a * b


@dataclass(frozen=True)
class TrialDivisionResult:
    """Prime factors <= 1000 (with multiplicity) and the coprime remainder."""

    small_factors: tuple[int, ...]
    remainder: int

    def reconstruct(self) -> int:
        product = self.remainder
        for p in self.small_factors:
            product *= p
        return product


def trial_divide(x: int) -> TrialDivisionResult:
    """Strip every prime factor <= 1000 from x, to full multiplicity."""
    if x < 2:
        raise ValueError("trial division requires x >= 2")
    found: list[int] = []
    remainder = x
    for p in SMALL_PRIMES:
        if remainder == 1:
            break
        if p * p > remainder:
            # remainder is prime here; it only counts if it is itself <= 1000
            if remainder <= 1000:
                found.append(remainder)
                remainder = 1
            break
        while remainder % p == 0:
            found.append(p)
            remainder //= p
    return TrialDivisionResult(tuple(found), remainder)


# Deterministic Miller-Rabin witness tiers (classical tables; the last tier
# covers everything below 3.3e24, comfortably past 2**64).
_MR_TIERS: tuple[tuple[int, tuple[int, ...]], ...] = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (9_080_191, (31, 73)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (4_759_123_141, (2, 7, 61)),
    (1_122_004_669_633, (2, 13, 23, 1662803)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (318_665_857_834_031_151_167_461, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)

_RANDOM_MR_ROUNDS = 64  # error < 4**-64 = 2**-128 above the deterministic range


def _mr_witness(a: int, d: int, r: int, n: int) -> bool:
    """True if a proves n composite."""
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def is_prime(x: int) -> bool:
    """Primality of x >= 2: deterministic below 2**64, else 64 Miller-Rabin
    rounds with bases drawn from a seed derived from x (so the function stays
    deterministic per input)."""
    if x < 2:
        raise ValueError("primality test requires x >= 2")
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x == p:
            return True
        if x % p == 0:
            return False
    d = x - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for bound, bases in _MR_TIERS:
        if x < bound:
            witnesses = bases
            break
    else:
        picker = random.Random(x)
        witnesses = tuple(picker.randrange(2, x - 1) for _ in range(_RANDOM_MR_ROUNDS))
    return not any(_mr_witness(a % x, d, r, x) for a in witnesses)
