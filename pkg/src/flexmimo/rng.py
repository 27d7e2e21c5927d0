"""Counter-based random streams.

A stream is addressed by ``(seed, tag)``; every draw is a pure function of
that pair plus caller-supplied counters, so Monte Carlo work can be split
across workers without sharing generator state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HARDENING = 1
FADING = 2
OPTIMIZER = 3
SE_EE = 4
NETWORK = 5

_MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix(x: np.ndarray) -> np.ndarray:
    # splitmix64 finalizer, wrapping uint64 arithmetic
    with np.errstate(over="ignore"):
        x = x + _GOLDEN
        x = (x ^ (x >> np.uint64(30))) * _M1
        x = (x ^ (x >> np.uint64(27))) * _M2
        return x ^ (x >> np.uint64(31))


def _as_u64(values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values))
    if arr.dtype.kind == "f":
        raise TypeError("hash keys must be integers")
    return arr.astype(np.int64, copy=False).view(np.uint64) if arr.dtype.kind == "i" else arr.astype(np.uint64)


def hash64(*keys) -> np.ndarray:
    """Mix integer keys (broadcast together) into uniformly distributed uint64 words."""
    arrays = np.broadcast_arrays(*[_as_u64(k) for k in keys])
    h = np.zeros(arrays[0].shape, dtype=np.uint64)
    for a in arrays:
        h = _splitmix(h ^ a)
    return h


def to_unit_open(bits: np.ndarray) -> np.ndarray:
    """Map uint64 words to floats strictly inside (0, 1) using the top 52 bits."""
    return ((bits >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0**-52


@dataclass(frozen=True)
class RngStream:
    """Stateless random stream: identical ``(seed, tag, counters)`` give identical draws."""

    seed: int
    tag: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) <= _MASK64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if int(self.tag) < 0:
            raise ValueError("tag must be non-negative")

    def with_tag(self, tag: int) -> "RngStream":
        return RngStream(self.seed, tag)

    def key(self) -> tuple[int, int]:
        k = hash64(np.uint64(self.seed), np.uint64(self.tag))
        k2 = _splitmix(k)
        return int(k[0]), int(k2[0])

    def uniforms(self, *counters) -> np.ndarray:
        """Uniform (0, 1) values addressed by integer counter arrays."""
        return to_unit_open(hash64(np.uint64(self.seed), np.uint64(self.tag), *counters))

    def generator(self, block: int = 0) -> np.random.Generator:
        """Philox generator for counter block ``block``.

        Blocks occupy disjoint regions of the Philox counter space (the block
        index sits in the top counter word), so block ``i`` can be handed to
        worker ``i`` and results merged by block index.
        """
        if block < 0:
            raise ValueError("block must be non-negative")
        counter = np.array([0, 0, 0, block], dtype=np.uint64)
        bitgen = np.random.Philox(key=np.array(self.key(), dtype=np.uint64), counter=counter)
        return np.random.Generator(bitgen)
