"""Deterministic 64-bit random streams shared by the pure and compiled engines.

The annealing loop exists twice: once in Python and once in the compiled
kernel. Both must draw identical values for a given seed so that one can be
checked against the other, which rules out ``random.Random`` and numpy's
generators (their bounded-draw algorithms are not practical to reproduce
draw-for-draw from C). Instead we use xoshiro256** (Blackman & Vigna,
public domain), a few lines in either language.
"""

from __future__ import annotations

import hashlib

_MASK64 = (1 << 64) - 1
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; return (new_state, output)."""
    state = (state + _SM_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _SM_MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _SM_MIX2) & _MASK64
    return state, z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** generator seeded through splitmix64.

    All randomness used by the annealing engines flows through the three
    methods below. Any change to their draw behaviour must be mirrored in
    ``_kernel.pyx``.
    """

    __slots__ = ("_s0", "_s1", "_s2", "_s3")

    def __init__(self, seed: int):
        sm = seed & _MASK64
        words = []
        for _ in range(4):
            sm, word = splitmix64(sm)
            words.append(word)
        if not any(words):
            words[0] = 1  # the all-zero state is a fixed point
        self._s0, self._s1, self._s2, self._s3 = words

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (s1 * 5) & _MASK64
        result = (((result << 7) | (result >> 57)) & _MASK64) * 9 & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * 1.1102230246251565e-16  # 2**-53

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) via masked rejection; n == 1 is draw-free."""
        if n <= 1:
            return 0
        mask = (1 << (n - 1).bit_length()) - 1
        while True:
            value = self.next_u64() & mask
            if value < n:
                return value

    def getstate(self) -> tuple[int, int, int, int]:
        return (self._s0, self._s1, self._s2, self._s3)

    def setstate(self, state) -> None:
        s0, s1, s2, s3 = (int(w) & _MASK64 for w in state)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3


def derive_seed(*parts: int | str) -> int:
    """Collapse (seed context, labels, indices) into a stable 64-bit seed.

    Uses SHA-256 over length-prefixed decimal/utf-8 encodings, so the result
    does not depend on the platform or the process hash seed.
    """
    digest = hashlib.sha256()
    for part in parts:
        data = part.encode() if isinstance(part, str) else str(int(part)).encode()
        digest.update(len(data).to_bytes(4, "little"))
        digest.update(data)
    return int.from_bytes(digest.digest()[:8], "little")
