"""Deterministic pseudo-randomness shared by corpus splitting and typo injection.

Everything here is fixed-width integer arithmetic so that the same seed
produces the same stream on every platform and in every implementation
language. No use of ``random`` anywhere in the package.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """The splitmix64 output mixing function (finalizer) on a 64-bit value."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """splitmix64 generator (Steele, Lea & Flood).

    state_{n+1} = state_n + 0x9E3779B97F4A7C15 (mod 2^64); output = mix64(state_{n+1}).
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def randbelow(self, n: int) -> int:
        """Uniform-ish draw in [0, n) via modulo reduction.

        The modulo bias is below 2^-40 for any n this package draws
        (list indices), and the reduction is trivially reproducible in
        any language, which is the property we actually need.
        """
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        return self.next_u64() % n


def fisher_yates(items: list, rng: SplitMix64) -> None:
    """In-place Fisher-Yates shuffle: i from len-1 down to 1, j = randbelow(i+1)."""
    for i in range(len(items) - 1, 0, -1):
        j = rng.randbelow(i + 1)
        items[i], items[j] = items[j], items[i]


def fnv1a64(data: str) -> int:
    """FNV-1a 64-bit hash of the UTF-8 bytes; stable across runs and platforms."""
    h = 0xCBF29CE484222325
    for byte in data.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & _MASK64
    return h
