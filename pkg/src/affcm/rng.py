"""Portable seeded random streams.

Every random draw in the package comes from SplitMix64 so that the streams
can be reproduced bit-for-bit in other languages:

    state <- state + 0x9E3779B97F4A7C15             (mod 2**64)
    z     <- state
    z     <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2**64)
    z     <- (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2**64)
    out   <- z ^ (z >> 31)

Uniform doubles take the top 53 bits: ``(out >> 11) * 2**-53``, giving
values in [0, 1). Standard normals use the Marsaglia polar method; both
values of each accepted pair are used, the second one cached for the next
call.
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


class SplitMix64:
    """SplitMix64 generator with uniform, bounded-integer and normal draws."""

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64
        self._spare: float | None = None

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by rejection on the top of the range."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break
        f = math.sqrt(-2.0 * math.log(s) / s)
        self._spare = v * f
        return u * f

    def sample_without_replacement(self, n: int, k: int) -> list[int]:
        """First ``k`` slots of a partial Fisher-Yates shuffle of ``range(n)``."""
        idx = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k]


def derive_seeds(seed: int, count: int) -> list[int]:
    """Child seeds for independent trials: the first ``count`` outputs of the stream."""
    gen = SplitMix64(seed)
    return [gen.next_u64() for _ in range(count)]
