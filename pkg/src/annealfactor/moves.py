"""Neighbor generation: permutations of the bits of one trial factor.

Every move rearranges digits strictly below the leading 1 (and above the
locked low bit, when a factor of an odd target has its bit 1 pinned), so
digit count and popcount are invariant by construction.

The ``*_bits`` functions work directly on int values and are shared with the
pure engine; ``_kernel.pyx`` reimplements them on machine words. The order
and number of RNG draws here is a compatibility contract with the kernel:
any change must be mirrored there.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .rng import Xoshiro256


class MoveKind(Enum):
    SWAP = "swap"
    SLIDE = "slide"
    REVERSE = "reverse"
    RANDOM = "random"


@dataclass(frozen=True)
class FactorConfig:
    """One trial factor: a `length`-digit odd-or-even value with `ones` set digits.

    The digit at position `length` (the leading digit) is always 1. With
    ``lock_low`` set, bit 1 is also pinned to 1 (used when the target is odd,
    since factors of an odd number are odd).
    """

    value: int
    length: int
    ones: int
    lock_low: bool = False

    def __post_init__(self):
        if self.value.bit_length() != self.length:
            raise ValueError(
                f"value {self.value:#b} has {self.value.bit_length()} digits, expected {self.length}"
            )
        if self.value.bit_count() != self.ones:
            raise ValueError(
                f"value {self.value:#b} has {self.value.bit_count()} ones, expected {self.ones}"
            )
        if self.lock_low and self.length > 1 and not self.value & 1:
            raise ValueError("lock_low requires an odd value")


def _mutable_region(length: int, lock_low: bool) -> tuple[int, int]:
    """(lowest mutable 0-based bit index, region size); leading bit excluded."""
    low = 1 if lock_low else 0
    return low, max(0, (length - 1) - low)


def swap_bits(value: int, length: int, lock_low: bool, rng: Xoshiro256) -> int:
    """Exchange one 1-digit with one 0-digit, both chosen uniformly."""
    low, size = _mutable_region(length, lock_low)
    if size <= 0:
        return value
    region_mask = ((1 << size) - 1) << low
    ones = (value & region_mask).bit_count()
    zeros = size - ones
    if ones == 0 or zeros == 0:
        return value
    nth_one = rng.randbelow(ones)
    nth_zero = rng.randbelow(zeros)
    pos_one = pos_zero = -1
    seen = 0
    for p in range(low, length - 1):
        if (value >> p) & 1:
            if seen == nth_one:
                pos_one = p
                break
            seen += 1
    seen = 0
    for p in range(low, length - 1):
        if not (value >> p) & 1:
            if seen == nth_zero:
                pos_zero = p
                break
            seen += 1
    return value ^ (1 << pos_one) ^ (1 << pos_zero)


def _pick_range(low: int, size: int, rng: Xoshiro256) -> tuple[int, int]:
    """Uniform contiguous sub-range: both endpoints drawn, then ordered."""
    x = rng.randbelow(size)
    y = rng.randbelow(size)
    if x > y:
        x, y = y, x
    return low + x, low + y


def slide_bits(value: int, length: int, lock_low: bool, rng: Xoshiro256) -> int:
    """Rotate a contiguous sub-range down by one position.

    The digit at the low end of the range is removed, the others each move
    one position toward the least-significant end, and the removed digit
    fills the hole at the high end.
    """
    low, size = _mutable_region(length, lock_low)
    if size < 2:
        return value
    lo, hi = _pick_range(low, size, rng)
    span = hi - lo + 1
    seg_mask = ((1 << span) - 1) << lo
    seg = (value & seg_mask) >> lo
    rotated = (seg >> 1) | ((seg & 1) << (span - 1))
    return (value & ~seg_mask) | (rotated << lo)


def reverse_bits(value: int, length: int, lock_low: bool, rng: Xoshiro256) -> int:
    """Mirror a contiguous sub-range of digits."""
    low, size = _mutable_region(length, lock_low)
    if size < 2:
        return value
    lo, hi = _pick_range(low, size, rng)
    span = hi - lo + 1
    seg_mask = ((1 << span) - 1) << lo
    seg = (value & seg_mask) >> lo
    mirrored = 0
    for k in range(span):
        mirrored |= ((seg >> k) & 1) << (span - 1 - k)
    return (value & ~seg_mask) | (mirrored << lo)


def permute_bits(value: int, length: int, lock_low: bool, rng: Xoshiro256) -> int:
    """Apply a uniform random permutation to a sparse selection of digits.

    Selection size is uniform on 2..max(2, ceil(region/4)); the positions are
    a partial Fisher-Yates draw, the extracted digits get a full
    Fisher-Yates shuffle before being written back.
    """
    low, size = _mutable_region(length, lock_low)
    if size < 2:
        return value
    pick_max = max(2, (size + 3) // 4)
    count = 2 + rng.randbelow(pick_max - 1)
    positions = list(range(low, length - 1))
    for t in range(count):
        r = t + rng.randbelow(size - t)
        positions[t], positions[r] = positions[r], positions[t]
    digits = [(value >> positions[t]) & 1 for t in range(count)]
    for t in range(count - 1, 0, -1):
        r = rng.randbelow(t + 1)
        digits[t], digits[r] = digits[r], digits[t]
    out = value
    for t in range(count):
        out = (out & ~(1 << positions[t])) | (digits[t] << positions[t])
    return out


_BY_KIND = {
    MoveKind.SWAP: swap_bits,
    MoveKind.SLIDE: slide_bits,
    MoveKind.REVERSE: reverse_bits,
    MoveKind.RANDOM: permute_bits,
}

#: Engine dispatch order; index k here must match kind k in the kernel.
MOVE_TABLE = (swap_bits, slide_bits, reverse_bits, permute_bits)


def propose(config: FactorConfig, kind: MoveKind, rng: Xoshiro256) -> FactorConfig:
    """Neighbor of `config` under the given move kind.

    Returns the input unchanged when the move degenerates (single-digit
    value, or a mutable region whose digits are all equal).
    """
    new_value = _BY_KIND[kind](config.value, config.length, config.lock_low, rng)
    if new_value == config.value:
        return config
    return replace(config, value=new_value)


def swap_move(config: FactorConfig, rng: Xoshiro256) -> FactorConfig:
    return propose(config, MoveKind.SWAP, rng)


def slide_move(config: FactorConfig, rng: Xoshiro256) -> FactorConfig:
    return propose(config, MoveKind.SLIDE, rng)


def reverse_move(config: FactorConfig, rng: Xoshiro256) -> FactorConfig:
    return propose(config, MoveKind.REVERSE, rng)


def random_move(config: FactorConfig, rng: Xoshiro256) -> FactorConfig:
    return propose(config, MoveKind.RANDOM, rng)


def sample_factor_bits(length: int, ones: int, lock_low: bool, rng: Xoshiro256) -> int | None:
    """Random `length`-digit value with `ones` set digits (leading digit 1).

    Places the pinned digits first, then scatters the remaining ones
    uniformly over the free positions. Returns None when the pinned digits
    make the popcount unsatisfiable (only possible with lock_low).
    """
    if not 1 <= ones <= length:
        return None
    if length == 1:
        return 1
    base = 1 << (length - 1)
    low, size = _mutable_region(length, lock_low)
    need = ones - 1 - low
    if need < 0 or need > size:
        return None
    if lock_low:
        base |= 1
    positions = list(range(low, length - 1))
    for t in range(need):
        r = t + rng.randbelow(size - t)
        positions[t], positions[r] = positions[r], positions[t]
    for t in range(need):
        base |= 1 << positions[t]
    return base
