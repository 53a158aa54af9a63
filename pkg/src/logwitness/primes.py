"""Sieves and a deterministic primality test for window bounds."""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
SEGMENT = 1 << 18


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24 (so all 64-bit n)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve(limit: int) -> np.ndarray:
    """All primes ``<= limit`` (Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags).astype(np.int64)


def iter_primes_between(lo: int, hi: int) -> Iterator[int]:
    """Primes ``p`` with ``lo < p <= hi`` in ascending order, sieved by segment."""
    if hi <= lo or hi < 2:
        return
    base = sieve(math.isqrt(hi))
    start = max(lo + 1, 2)
    while start <= hi:
        stop = min(start + SEGMENT, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for q in base:
            q = int(q)
            if q * q >= stop:
                break
            first = max(q * q, -(-start // q) * q)
            flags[first - start :: q] = False
        for offset in np.flatnonzero(flags):
            yield start + int(offset)
        start = stop
