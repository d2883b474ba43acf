"""Independent reference implementations used to freeze expected values.

Everything here is deliberately naive (repeated division, digit lists,
explicit permutation application) and shares no code with the package.
"""

from __future__ import annotations

import math


def popcount_oracle(x: int) -> int:
    count = 0
    while x:
        x, digit = divmod(x, 2)
        count += digit
    return count


def digits_oracle(x: int) -> list[int]:
    """Binary digits, least significant first."""
    digits = []
    while x:
        x, digit = divmod(x, 2)
        digits.append(digit)
    return digits


def prime_oracle(x: int) -> bool:
    if x < 2:
        return False
    for d in range(2, math.isqrt(x) + 1):
        if x % d == 0:
            return False
    return True


def factor_oracle(x: int) -> list[int]:
    """Complete prime factorization by trial division, ascending."""
    factors = []
    d = 2
    while d * d <= x:
        while x % d == 0:
            factors.append(d)
            x //= d
        d += 1
    if x > 1:
        factors.append(x)
    return factors


def spf_sieve(limit: int) -> list[int]:
    """smallest-prime-factor table for 0..limit."""
    spf = list(range(limit + 1))
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for multiple in range(p * p, limit + 1, p):
                if spf[multiple] == multiple:
                    spf[multiple] = p
    return spf


def factor_with_spf(x: int, spf: list[int]) -> list[int]:
    factors = []
    while x > 1:
        p = spf[x]
        factors.append(p)
        x //= p
    return factors


def energy_oracle(a: int, b: int, target: int, weight) -> int:
    """Digit-by-digit comparison of a*b against the target."""
    product_digits = digits_oracle(a * b)
    target_digits = digits_oracle(target)
    total = 0
    for i in range(1, len(target_digits) + 1):
        product_digit = product_digits[i - 1] if i <= len(product_digits) else 0
        if product_digit == target_digits[i - 1]:
            total += weight(i)
    return total


def rotate_down_oracle(digits: list[int], lo: int, hi: int) -> list[int]:
    """Rotate digits[lo..hi] (0-based, inclusive) down one position: the
    entry at lo wraps around to hi, everything else shifts one index down."""
    out = list(digits)
    segment = out[lo : hi + 1]
    out[lo : hi + 1] = segment[1:] + segment[:1]
    return out


def reverse_oracle(digits: list[int], lo: int, hi: int) -> list[int]:
    out = list(digits)
    out[lo : hi + 1] = out[lo : hi + 1][::-1]
    return out


def value_of_digits(digits: list[int]) -> int:
    return sum(digit << i for i, digit in enumerate(digits))
