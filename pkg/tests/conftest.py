"""Shared test oracles, kept deliberately naive and independent of the package
code paths they check."""

from __future__ import annotations

import numpy as np


def random_image(rng: np.random.Generator, height: int, width: int) -> np.ndarray:
    return rng.integers(0, 256, size=(height, width), dtype=np.uint8)


def naive_rank(segment) -> list[int]:
    """Selection-based ranking: repeatedly pick the largest remaining sample,
    earliest index first on ties."""
    seg = list(segment)
    remaining = list(range(len(seg)))
    order = []
    while remaining:
        best = remaining[0]
        for idx in remaining[1:]:
            if seg[idx] > seg[best]:
                best = idx
        order.append(best)
        remaining.remove(best)
    return order


def candidate_sets(plain_grids, cipher_grids) -> list[frozenset]:
    """For each plain position, intersect over pairs the cipher positions
    showing the same value.  Quadratic on purpose: this is the slow method
    the refinement tree replaces, used as an independent cross-check."""
    size = plain_grids[0].size
    cands = []
    for p in range(size):
        candidates: set | None = None
        for plain, cipher in zip(plain_grids, cipher_grids):
            value = plain.reshape(-1)[p]
            matching = {int(q) for q in np.flatnonzero(cipher.reshape(-1) == value)}
            candidates = matching if candidates is None else candidates & matching
        cands.append(frozenset(candidates))
    return cands


def intersection_partition(plain_grids, cipher_grids) -> set:
    """Partition induced by the candidate-set method, as a set of
    (plain position class, common cipher candidate set) pairs."""
    cands = candidate_sets(plain_grids, cipher_grids)
    groups: dict[frozenset, list[int]] = {}
    for position, candidates in enumerate(cands):
        groups.setdefault(candidates, []).append(position)
    return {(frozenset(positions), candidates) for candidates, positions in groups.items()}


def tree_partition(tree) -> set:
    """The tree's leaf partition in the same shape as intersection_partition."""
    return {
        (frozenset(int(p) for p in plain), frozenset(int(c) for c in cipher))
        for plain, cipher in tree.leaf_sets()
    }
