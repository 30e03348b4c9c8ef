"""Deterministic 64-bit PRNG (splitmix64) with derived substreams.

All randomness in this package flows through :class:`SplitMix64` so that
identical inputs produce identical outputs on every platform and Python
version.  Independent objects (constraints, trials, sweep points) never
share a stream; each gets its own generator seeded with :func:`mix`, which
makes results independent of evaluation order and of how work is split
across processes.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _finalize(z: int) -> int:
    z = (z ^ (z >> 30)) * _MIX1 & MASK64
    z = (z ^ (z >> 27)) * _MIX2 & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """splitmix64: the state advances by the golden-ratio increment and each
    output is the bit-mix finalizer of the new state."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & MASK64
        return _finalize(self._state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound), unbiased via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        # reject draws above the largest multiple of bound below 2^64
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound

    def chance(self, threshold: int) -> bool:
        """True with probability threshold / 2**64."""
        return self.next_u64() < threshold


def mix(*parts: int) -> int:
    """Collapse integers into one 64-bit substream seed.

    Iterated splitmix64 steps with data injection: mix(seed, tag, index)
    derives the generator for object ``index`` of stream ``tag``.
    """
    acc = 0
    for part in parts:
        acc = _finalize((acc + _GOLDEN + (part & MASK64)) & MASK64)
    return acc


def bernoulli_threshold(p: float) -> int:
    """Integer threshold t with t/2**64 equal to p up to quantization.

    Clamped into [1, 2**64 - 1] so that inclusion and exclusion both stay
    reachable for every p in (0, 1).
    """
    t = int(p * float(1 << 64))
    return min(max(t, 1), MASK64)
