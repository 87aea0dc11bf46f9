"""SplitMix64 pseudo-random generator.

Course layouts and session plans must reproduce bit-exactly from a seed in
any implementation of the file formats, so the generator is pinned to a
small, fully documented algorithm rather than a host-language default.

Algorithm (Steele, Lea & Flood's SplitMix64): the 64-bit state advances by
the golden-gamma constant 0x9E3779B97F4A7C15 each draw; the output is the
state mixed by two xor-shift-multiply rounds (constants 0xBF58476D1CE4E5B9
and 0x94D049BB133111EB) and a final 31-bit xor-shift. Doubles take the top
53 bits of the output over 2^53.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO53 = float(1 << 53)


class SplitMix64:
    """Deterministic 64-bit generator; one instance per reproducible stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) / _TWO53

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def gauss(self, mu: float = 0.0, sigma: float = 1.0) -> float:
        """Box-Muller normal deviate (no spare caching, to keep replay simple)."""
        import math

        u1 = self.random()
        while u1 <= 0.0:
            u1 = self.random()
        u2 = self.random()
        return mu + sigma * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def mix_seed(*parts: int) -> int:
    """Collapse several integers into one well-mixed 64-bit seed.

    Feeds each part through a SplitMix64 step of the running state, so
    (a, b) and (b, a) give different streams.
    """
    state = 0x243F6A8885A308D3  # arbitrary nonzero start
    for part in parts:
        gen = SplitMix64(state ^ (part & _MASK64))
        state = gen.next_u64()
    return state
