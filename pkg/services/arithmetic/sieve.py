"""
Решета на numpy: простые до n и наименьший простой делитель.
"""
from functools import lru_cache
from typing import Tuple

import numpy as np


def prime_sieve(nmax: int) -> Tuple[np.ndarray, np.ndarray]:
    """Решето Эратосфена до nmax включительно.

    Args:
        nmax: верхняя граница

    Returns:
        (primes, is_prime): массив простых ≤ nmax и булев массив длины nmax+1
    """
    if nmax < 2:
        return np.array([], dtype=np.int64), np.zeros(max(nmax + 1, 0), dtype=bool)

    is_prime = np.ones(nmax + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, int(nmax ** 0.5) + 1):
        if is_prime[i]:
            is_prime[i * i::i] = False

    primes = np.nonzero(is_prime)[0].astype(np.int64)
    return primes, is_prime


@lru_cache(maxsize=8)
def primes_up_to(nmax: int) -> np.ndarray:
    primes, _ = prime_sieve(nmax)
    primes.setflags(write=False)
    return primes


def smallest_prime_factor(nmax: int) -> np.ndarray:
    """spf[n]: наименьший простой делитель n (spf[0] = 0, spf[1] = 1)."""
    spf = np.arange(nmax + 1, dtype=np.int64)
    for i in range(2, int(nmax ** 0.5) + 1):
        if spf[i] == i:
            block = spf[i * i::i]
            np.copyto(block, i, where=block == np.arange(i * i, nmax + 1, i))
    return spf
