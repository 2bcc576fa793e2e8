"""Population permutations of diagonal states, stored as ``target <- source`` maps."""

from __future__ import annotations

from typing import Iterable

import numpy as np


def complete_permutation(assign: Iterable[tuple[int, int]]) -> dict[int, int]:
    """Close a partial ``target <- source`` assignment into a permutation.

    Populations pushed out of assigned targets fill the vacated sources,
    both taken in ascending index order.
    """
    mapping: dict[int, int] = {}
    used_sources: set = set()
    for t, s in assign:
        t, s = int(t), int(s)
        if t in mapping or s in used_sources:
            raise ValueError(f"assignment {t} <- {s} collides with an earlier one")
        mapping[t] = s
        used_sources.add(s)
    displaced = sorted(set(mapping) - used_sources)
    vacated = sorted(used_sources - set(mapping))
    for src, dst in zip(displaced, vacated):
        mapping[dst] = src
    return {t: s for t, s in mapping.items() if t != s}


def permuted_overrides(mapping: dict[int, int], population_of) -> dict[int, float]:
    """New populations at every moved index, given a vectorized ``population_of(indices)``."""
    if not mapping:
        return {}
    targets = np.fromiter(mapping.keys(), dtype=np.int64)
    sources = np.fromiter(mapping.values(), dtype=np.int64)
    vals = population_of(sources)
    return dict(zip(targets.tolist(), vals.tolist()))
