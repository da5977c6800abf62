"""Counter-based random streams for reproducible Monte Carlo runs.

Streams are addressed by a (seed, stream) pair of 64-bit integers feeding a
Philox counter-based generator, so any sub-stream can be reconstructed from
its address alone. Trials, schemes, and channel components each derive their
own child streams, which keeps results bit-identical regardless of how work
is scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    """One SplitMix64 output step; used only to derive child stream ids."""
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class RngStream:
    """Address of an independent random stream.

    Equal (seed, stream) pairs always reproduce the same draw sequence;
    distinct stream ids give statistically independent sequences. Child
    streams are derived by hashing index paths, so ``child(a, b)`` equals
    ``child(a).child(b)``.
    """

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.seed <= _MASK64):
            raise ValueError("seed must fit in 64 bits")
        if not (0 <= self.stream <= _MASK64):
            raise ValueError("stream must fit in 64 bits")

    def child(self, *indices: int) -> "RngStream":
        s = self.stream
        for k in indices:
            s = _splitmix64(s ^ _splitmix64(int(k) & _MASK64))
        return RngStream(self.seed, s)

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def sample_complex_gaussian(rng: RngStream, n: int) -> np.ndarray:
    """Draw n i.i.d. circularly symmetric complex normals with unit variance.

    Real and imaginary parts are independent N(0, 1/2), so E[|z|^2] = 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = rng.generator().standard_normal((int(n), 2))
    return (z[:, 0] + 1j * z[:, 1]) / np.sqrt(2.0)
