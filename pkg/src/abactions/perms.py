"""Permutations of small degree, subgroup closure and subgroup classes of S_r.

Points are 0-based internally and 1-based in cycle notation. Products
compose left to right: (a*b)(i) = b(a(i)). With that convention the
permutation matrix whose rows are E_{a(1)}, ..., E_{a(r)} is a
homomorphism, pi(a*b) = pi(a) @ pi(b).
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations

import numpy as np

from .ff import FpMatrix

MAX_DEGREE = 6


@dataclass(frozen=True, order=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, r: int) -> Perm:
        return cls(tuple(range(r)))

    @classmethod
    def from_cycles(cls, r: int, cycles: Iterable[Sequence[int]]) -> Perm:
        """Build from 1-based cycles, e.g. from_cycles(4, [(1, 2), (3, 4)])."""
        img = list(range(r))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Perm) -> Perm:
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Perm(tuple(other.images[i] for i in self.images))

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def conj(self, g: Perm) -> Perm:
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        k, x = 1, self
        while not x.is_identity():
            x = x * self
            k += 1
        return k

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, 1-based."""
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j + 1)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


@dataclass(frozen=True)
class PermSubgroup:
    degree: int
    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Perm) -> bool:
        return g in self._set

    @cached_property
    def _set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermSubgroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, self.elements))

    def conjugate(self, g: Perm) -> PermSubgroup:
        """g^-1 H g."""
        return closure([h.conj(g) for h in self.generators], self.degree)

    def is_subgroup_of(self, other: PermSubgroup) -> bool:
        return self._set <= other._set

    def orbits(self) -> list[tuple[int, ...]]:
        """Orbit partition of {1..r}, each orbit sorted, 1-based."""
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for i in range(self.degree):
                a, b = find(i), find(g(i))
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for i in range(self.degree):
            groups.setdefault(find(i), []).append(i + 1)
        return sorted(tuple(v) for v in groups.values())

    def cycle_generators(self) -> list[list[tuple[int, ...]]]:
        return [g.cycles() for g in self.generators]


def closure(gens: Sequence[Perm], r: int | None = None) -> PermSubgroup:
    """Smallest subgroup containing gens."""
    degrees = {g.degree for g in gens}
    if r is not None:
        degrees.add(r)
    if len(degrees) > 1:
        raise ValueError(f"mixed degrees {sorted(degrees)}")
    if not degrees:
        raise ValueError("degree unknown for empty generator list")
    r = degrees.pop()
    if r > MAX_DEGREE:
        raise ValueError(f"degree {r} exceeds cap {MAX_DEGREE}")
    e = Perm.identity(r)
    seen = {e}
    frontier = [e]
    gens = [g for g in gens if not g.is_identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return PermSubgroup(r, tuple(sorted(seen)), tuple(gens))


@lru_cache(maxsize=None)
def symmetric_group(r: int) -> tuple[Perm, ...]:
    return tuple(Perm(p) for p in permutations(range(r)))


def normalizer_in_sym(H: PermSubgroup) -> PermSubgroup:
    """N(H) = {a in S_r : a^-1 H a = H}."""
    hs = H._set
    norm = [a for a in symmetric_group(H.degree) if all(h.conj(a) in hs for h in H.generators)]
    return PermSubgroup(H.degree, tuple(sorted(norm)), tuple(norm))


def perm_matrix(a: Perm, p: int) -> FpMatrix:
    """Rows E_{a(1)}, ..., E_{a(r)} of the identity."""
    r = a.degree
    m = np.zeros((r, r), dtype=np.int64)
    m[np.arange(r), list(a.images)] = 1
    return FpMatrix(m, p)


def all_subgroups(G: PermSubgroup) -> list[PermSubgroup]:
    """Every subgroup of G, by repeatedly joining known subgroups with single elements."""
    elems = G.elements
    idx = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    mul = [[idx[a * b] for b in elems] for a in elems]

    def close(gen_idx: list[int]) -> frozenset[int]:
        seen = {idx[Perm.identity(G.degree)]}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                row = mul[x]
                for g in gen_idx:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    found: dict[frozenset[int], list[int]] = {close([]): []}
    frontier = list(found.items())
    while frontier:
        nxt = []
        for S, gens in frontier:
            for g in range(n):
                if g in S:
                    continue
                T = close(gens + [g])
                if T not in found:
                    found[T] = gens + [g]
                    nxt.append((T, gens + [g]))
        frontier = nxt
    out = []
    for S, gens in found.items():
        out.append(PermSubgroup(G.degree, tuple(sorted(elems[i] for i in S)), tuple(elems[i] for i in gens)))
    return sorted(out, key=lambda H: (H.order, H.elements))


@dataclass(frozen=True)
class SubgroupClass:
    representative: PermSubgroup
    class_size: int
    orbits: list[tuple[int, ...]]
    order: int


@dataclass(frozen=True)
class SubgroupClassTable:
    degree: int
    classes: list[SubgroupClass]

    def index_of(self, H: PermSubgroup) -> int:
        """Index of the class containing H."""
        key = _conj_key(H)
        for i, c in enumerate(self.classes):
            if _conj_key(c.representative) == key:
                return i
        raise KeyError("subgroup not found")


def _conj_key(H: PermSubgroup) -> tuple:
    """Lexicographically least sorted element list over all conjugates."""
    return _conj_key_cached(H.degree, H.elements)


@lru_cache(maxsize=None)
def _conj_key_cached(r: int, elements: tuple[Perm, ...]) -> tuple:
    best = None
    for g in symmetric_group(r):
        c = tuple(sorted(h.conj(g) for h in elements))
        if best is None or c < best:
            best = c
    return best


@lru_cache(maxsize=None)
def subgroup_classes(r: int) -> SubgroupClassTable:
    """Conjugacy classes of subgroups of S_r, ordered by (order, least element list)."""
    if r > 5:
        raise ValueError(f"subgroup classes only for degree <= 5, got {r}")
    sym = closure(list(symmetric_group(r)), r)
    subs = all_subgroups(sym)
    classes: dict[tuple, list[PermSubgroup]] = {}
    for H in subs:
        classes.setdefault(_conj_key(H), []).append(H)
    out = []
    for key, members in classes.items():
        rep = next(H for H in members if H.elements == key)
        out.append(SubgroupClass(rep, len(members), rep.orbits(), rep.order))
    out.sort(key=lambda c: (c.order, c.representative.elements))
    return SubgroupClassTable(r, out)


def are_conjugate(H: PermSubgroup, K: PermSubgroup) -> bool:
    return H.order == K.order and _conj_key(H) == _conj_key(K)
