"""Digit-match score between a trial product and the factoring target.

The score sums a position weight over every binary digit where the product
of the trial factors agrees with the target, counting digits 1..n only
(n = digit count of the target). Weights grow with significance, so a pair
whose product matches the high-order digits scores higher. The score is an
exact integer; acceptance thresholds built from it are reproducible.
"""

from __future__ import annotations

from enum import Enum


class CostFunction(Enum):
    """Monotone weight on digit position i >= 1 (least significant = 1)."""

    LINEAR = "linear"
    QUADRATIC = "quadratic"

    def weight(self, i: int) -> int:
        if i < 1:
            raise ValueError("digit positions start at 1")
        return i if self is CostFunction.LINEAR else i * i

    def weights(self, n: int) -> list[int]:
        """[f(1), ..., f(n)] for engines that index weights by bit position."""
        if self is CostFunction.LINEAR:
            return list(range(1, n + 1))
        return [i * i for i in range(1, n + 1)]


def energy(a: int, b: int, target: int, cost: CostFunction) -> int:
    """Weighted count of digits where a*b matches the target.

    Only digit positions 1..n of the product take part (n = digit count of
    the target); product digits above n are invisible to the score, and
    positions beyond the product's own length count as 0 digits. A maximal
    score therefore does not by itself prove a*b == target.
    """
    if target < 2:
        raise ValueError("target must be >= 2")
    if a < 1 or b < 1:
        raise ValueError("trial factors must be >= 1")
    n = target.bit_length()
    mask = (1 << n) - 1
    agree = ((a * b ^ target) & mask) ^ mask
    total = 0
    while agree:
        low = agree & -agree
        total += cost.weight(low.bit_length())
        agree ^= low
    return total


def max_energy(n: int, cost: CostFunction) -> int:
    """Score of a full digit match: sum of f(i) for i = 1..n."""
    if n < 1:
        raise ValueError("digit count must be >= 1")
    if cost is CostFunction.LINEAR:
        return n * (n + 1) // 2
    return n * (n + 1) * (2 * n + 1) // 6
