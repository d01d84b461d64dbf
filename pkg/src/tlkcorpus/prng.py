"""Portable seeded randomness for reproducible corpus construction.

Every random choice in the pipeline (balancing subsample, split shuffle) goes
through SplitMix64, a public-domain 64-bit generator with a one-word state.
The algorithm is fixed here, not delegated to the host language's default
generator, so a corpus built from the same inputs, config, and seed is
byte-identical across implementations and platform versions.

Stream discipline: each pipeline stage draws from its own stream. A stream
seed is derived as ``seed XOR fnv1a64(stream_name)``, so streams never share
state and inserting draws into one stage cannot shift another stage's output.
Stream names in use: ``"balance"`` and ``"split"``.

Bounded integers use rejection sampling (draw a 64-bit word, reject values at
or above the largest multiple of ``n``), which is unbiased and portable.
Shuffling is the descending Fisher-Yates walk over that primitive.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

T = TypeVar("T")


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash, used only to derive per-stream seeds."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood's mixing constants)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    @classmethod
    def for_stream(cls, seed: int, stream: str) -> "SplitMix64":
        """Generator for a named stream derived from the config seed."""
        return cls((seed & _MASK64) ^ fnv1a64(stream.encode("utf-8")))

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = ((1 << 64) // n) * n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, descending index walk."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), returned in ascending order.

        Implemented as a full shuffle followed by taking the first k, so the
        result depends only on (seed position, n, k).
        """
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} of {n}")
        idx = list(range(n))
        self.shuffle(idx)
        return sorted(idx[:k])

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """k items sampled without replacement, original order preserved."""
        return [items[i] for i in self.sample_indices(len(items), k)]
