"""Bitstring bookkeeping for n-qubit registers.

Qubit 0 is the most significant bit of a basis index, so the integer order of
indices equals the lexicographic order of their bitstrings.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np


def index_of(qubits, n: int) -> int:
    """Basis index with a 1 on each listed qubit."""
    return sum(1 << (n - 1 - q) for q in qubits)


def qubits_of(index: int, n: int) -> tuple:
    return tuple(q for q in range(n) if index >> (n - 1 - q) & 1)


def popcount(index: int) -> int:
    return bin(index).count("1")


def weights(n: int) -> np.ndarray:
    """Hamming weight of every basis index of an n-qubit register."""
    w = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        w = np.add.outer(w, np.array([0, 1])).ravel()
    return w


@lru_cache(maxsize=None)
def weight_class(n: int, w: int) -> np.ndarray:
    """Indices of Hamming weight ``w`` in ascending (lexicographic) order."""
    if not 0 <= w <= n:
        return np.zeros(0, dtype=np.int64)
    idx = [index_of(c, n) for c in combinations(range(n), w)]
    out = np.array(sorted(idx), dtype=np.int64)
    out.setflags(write=False)
    return out


def complement(index: int, n: int) -> int:
    return (1 << n) - 1 - index


def swap_positions(a: int, b: int, qubits, n: int) -> tuple[int, int]:
    """Exchange the bits of ``a`` and ``b`` on the given qubits.

    ``swap_positions(0b01100, 0b11000, (1, 2), 5) == (0b01000, 0b11100)``.
    """
    mask = index_of(qubits, n)
    return (a & ~mask) | (b & mask), (b & ~mask) | (a & mask)


def binom(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
