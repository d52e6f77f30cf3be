"""Orbit partitions of large finite sets under generator maps.

Points are numbered 0..N-1 by position in a sorted array of integer codes.
A generator is applied to all codes at once and the images are located with
`searchsorted`. Components are merged by a vectorised union-find whose roots
are always the smallest member, so the result is independent of generator
and edge order.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable

import numpy as np


class UnionFind:
    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)

    def compress(self) -> None:
        par = self.parent
        while True:
            nxt = par[par]
            if np.array_equal(nxt, par):
                break
            par = nxt
        self.parent = par

    def union(self, a: np.ndarray, b: np.ndarray) -> None:
        """Merge the classes of a[k] and b[k] for every k."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        while a.size:
            self.compress()
            ra, rb = self.parent[a], self.parent[b]
            keep = ra != rb
            if not keep.any():
                break
            a, b, ra, rb = a[keep], b[keep], ra[keep], rb[keep]
            lo, hi = np.minimum(ra, rb), np.maximum(ra, rb)
            # hi is a root; when several edges hit one root the smallest lo wins, the rest retry.
            np.minimum.at(self.parent, hi, lo)
        self.compress()

    def labels(self) -> np.ndarray:
        """Root (smallest member) of every point."""
        self.compress()
        return self.parent


def locate(sorted_codes: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Positions of codes in sorted_codes; every code must be present."""
    pos = np.searchsorted(sorted_codes, codes)
    if pos.size and (pos.max() >= sorted_codes.size or not np.array_equal(sorted_codes[pos], codes)):
        raise AssertionError("generator image left the enumerated set")
    return pos


def orbit_labels(sorted_codes: np.ndarray, generators: Iterable[Callable[[np.ndarray], np.ndarray]],
                 chunk: int = 1 << 21) -> np.ndarray:
    """Label every point by the smallest index in its orbit.

    Each generator maps an array of codes to the array of image codes.
    """
    n = sorted_codes.size
    uf = UnionFind(n)
    for gen in generators:
        for start in range(0, n, chunk):
            src = np.arange(start, min(n, start + chunk), dtype=np.int64)
            dst = locate(sorted_codes, gen(sorted_codes[src]))
            uf.union(src, dst)
    return uf.labels()


def orbit_count(labels: np.ndarray) -> int:
    return int(np.count_nonzero(labels == np.arange(labels.size)))
