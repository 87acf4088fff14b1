"""Seeded random streams and the distributions the optimizers draw from."""

from __future__ import annotations

import math

import numpy as np

from metaopt.exceptions import InvalidArgumentError


class RandomStream:
    """A single-owner, seed-deterministic source of draws (PCG64 underneath).

    Not safe for concurrent use; give each run its own stream.
    """

    def __init__(self, seed: int = 0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.generator = np.random.Generator(np.random.PCG64(seed))

    def uniform(self, lo=0.0, hi=1.0, size=None):
        return self.generator.uniform(lo, hi, size)

    def normal(self, mean=0.0, stddev=1.0, size=None):
        return self.generator.normal(mean, stddev, size)

    def integers(self, lo, hi=None, size=None):
        return self.generator.integers(lo, hi, size)

    def choice(self, n, size=None, replace=True, p=None):
        return self.generator.choice(n, size=size, replace=replace, p=p)

    def permutation(self, n):
        return self.generator.permutation(n)


def _count(count):
    if int(count) < 0:
        raise InvalidArgumentError("count must be non-negative")
    return int(count)


def uniform(stream: RandomStream, lo: float, hi: float, count: int) -> np.ndarray:
    """Draw ``count`` values from U[lo, hi)."""
    if lo > hi:
        raise InvalidArgumentError(f"lo ({lo}) must not exceed hi ({hi})")
    count = _count(count)
    if lo == hi:
        # still advance the stream so draw order does not depend on the interval
        stream.uniform(0.0, 1.0, count)
        return np.full(count, float(lo))
    return stream.uniform(lo, hi, count)


def gaussian(stream: RandomStream, mean: float, stddev: float, count: int) -> np.ndarray:
    if stddev < 0:
        raise InvalidArgumentError("stddev must be non-negative")
    return stream.normal(mean, stddev, _count(count))


def bernoulli(stream: RandomStream, p: float, count: int) -> np.ndarray:
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError("p must lie in [0, 1]")
    return (stream.uniform(0.0, 1.0, _count(count)) < p).astype(np.int8)


def levy_sigma(lam: float) -> float:
    """Scale of the numerator normal in Mantegna's algorithm."""
    num = math.gamma(1.0 + lam) * math.sin(math.pi * lam / 2.0)
    den = math.gamma((1.0 + lam) / 2.0) * lam * 2.0 ** ((lam - 1.0) / 2.0)
    return (num / den) ** (1.0 / lam)


def levy(stream: RandomStream, lam: float, count) -> np.ndarray:
    """Lévy-stable steps via Mantegna's algorithm.

    ``count`` may be an int or a shape tuple. All numerator draws are taken
    before all denominator draws.
    """
    if not 1.0 < lam <= 3.0:
        raise InvalidArgumentError("lambda must lie in (1, 3]")
    if isinstance(count, (int, np.integer)):
        count = _count(count)
    u = stream.normal(0.0, levy_sigma(lam), count)
    v = stream.normal(0.0, 1.0, count)
    return u / np.abs(v) ** (1.0 / lam)
