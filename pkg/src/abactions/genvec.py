"""Generating vectors for abelian groups, the abelianised mapping-class moves,
the cup-product invariant, and the brute-force orbit oracle."""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .abelian import (AbAutomorphism, AbelianGroup, AbElement, Signature, TensorSquareElement,
                      automorphism_generators, enumerate_automorphisms, tensor_square)
from .errors import CeilingExceeded, InvalidMove
from .orbits import orbit_count, orbit_labels

ORACLE_CEILING = 2**26


@dataclass(frozen=True)
class GeneratingVector:
    group: AbelianGroup
    signature: Signature
    A: tuple[AbElement, ...]
    B: tuple[AbElement, ...]
    C: tuple[AbElement, ...] = ()

    def __post_init__(self):
        for name in ("A", "B", "C"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.A) != self.signature.rho or len(self.B) != self.signature.rho:
            raise ValueError("need exactly rho A's and B's")
        if len(self.C) != self.signature.branch_count:
            raise ValueError("need one C per period")

    @classmethod
    def from_coords(cls, G: AbelianGroup, sig: Signature, A: Sequence[Sequence[int]],
                    B: Sequence[Sequence[int]], C: Sequence[Sequence[int]] = ()) -> GeneratingVector:
        return cls(G, sig, tuple(G.element(a) for a in A), tuple(G.element(b) for b in B),
                   tuple(G.element(c) for c in C))

    @classmethod
    def from_indices(cls, G: AbelianGroup, sig: Signature, idx: Sequence[int]) -> GeneratingVector:
        rho = sig.rho
        el = [G.from_index(int(k)) for k in idx]
        return cls(G, sig, tuple(el[:rho]), tuple(el[rho:2 * rho]), tuple(el[2 * rho:]))

    def elements(self) -> tuple[AbElement, ...]:
        return self.A + self.B + self.C

    def indices(self) -> tuple[int, ...]:
        return tuple(self.group.index(x) for x in self.elements())

    def with_(self, A=None, B=None, C=None) -> GeneratingVector:
        return GeneratingVector(self.group, self.signature, self.A if A is None else A,
                                self.B if B is None else B, self.C if C is None else C)

    def transform(self, theta: AbAutomorphism) -> GeneratingVector:
        """theta composed with the epimorphism."""
        return self.with_(A=tuple(map(theta, self.A)), B=tuple(map(theta, self.B)), C=tuple(map(theta, self.C)))

    def as_json(self) -> dict:
        return {"A": [list(x.coords) for x in self.A], "B": [list(x.coords) for x in self.B],
                "C": [list(x.coords) for x in self.C]}

    def paired(self) -> tuple[AbElement, ...]:
        """Images in the order (alpha_1, beta_1, alpha_2, beta_2, ...)."""
        return tuple(x for pair in zip(self.A, self.B) for x in pair)

    def __str__(self) -> str:
        parts = [f"A{i + 1}={x}" for i, x in enumerate(self.A)] + [f"B{i + 1}={x}" for i, x in enumerate(self.B)]
        parts += [f"C{j + 1}={x}" for j, x in enumerate(self.C)]
        return " ".join(parts)


@dataclass(frozen=True)
class ValidityReport:
    order_mismatch: tuple[int, ...] = ()
    nonzero_sum: bool = False
    not_surjective: bool = False

    @property
    def ok(self) -> bool:
        return not (self.order_mismatch or self.nonzero_sum or self.not_surjective)

    def problems(self) -> list[str]:
        out = [f"C{j + 1} has the wrong order" for j in self.order_mismatch]
        if self.nonzero_sum:
            out.append("elliptic images do not sum to zero")
        if self.not_surjective:
            out.append("images do not generate the group")
        return out


def validate(gv: GeneratingVector) -> ValidityReport:
    G = gv.group
    bad = tuple(j for j, (c, m) in enumerate(zip(gv.C, gv.signature.periods)) if c.order() != m)
    s = G.zero()
    for c in gv.C:
        s = s + c
    return ValidityReport(bad, not s.is_zero(), not G.generates(list(gv.elements())))


@dataclass(frozen=True)
class Move:
    """One abelianised generator. Indices are 1-based; j is the C index for T, U, V."""

    kind: str
    i: int = 1
    j: int = 1
    k: int = 1

    def __post_init__(self):
        if self.kind not in "ABZRSTUV" or len(self.kind) != 1:
            raise ValueError(f"unknown move kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind in "RS":
            return f"{self.kind}{self.i}"
        if self.kind == "T":
            return f"T{self.j}"
        if self.kind in "UV":
            return f"{self.kind}{self.i},{self.j}^{self.k}"
        return f"{self.kind}{self.i}^{self.k}"


def apply_move(gv: GeneratingVector, m: Move) -> GeneratingVector:
    rho, r = gv.signature.rho, gv.signature.branch_count
    A, B, C = list(gv.A), list(gv.B), list(gv.C)
    i, j, k = m.i - 1, m.j - 1, m.k
    needs_pair = m.kind in "ABRUVZS"
    if needs_pair and not 0 <= i < rho:
        raise InvalidMove(f"{m}: pair index out of range")
    if m.kind in "ZS" and not i + 1 < rho:
        raise InvalidMove(f"{m}: needs a following pair")
    if m.kind in "UV" and not 0 <= j < r:
        raise InvalidMove(f"{m}: branch index out of range")
    if m.kind == "A":
        B[i] = B[i] + k * A[i]
    elif m.kind == "B":
        A[i] = A[i] + k * B[i]
    elif m.kind == "Z":
        A[i] = A[i] + k * A[i + 1]
        B[i + 1] = B[i + 1] - k * B[i]
    elif m.kind == "R":
        A[i], B[i] = B[i], -A[i]
    elif m.kind == "S":
        A[i], A[i + 1] = A[i + 1], A[i]
        B[i], B[i + 1] = B[i + 1], B[i]
    elif m.kind == "T":
        if not 0 <= j < r - 1:
            raise InvalidMove(f"{m}: branch index out of range")
        per = gv.signature.periods
        if per[j] != per[j + 1]:
            raise InvalidMove(f"{m}: periods {per[j]} and {per[j + 1]} differ")
        C[j], C[j + 1] = C[j + 1], C[j]
    elif m.kind == "U":
        B[i] = B[i] + k * C[j]
    elif m.kind == "V":
        A[i] = A[i] + k * C[j]
    return GeneratingVector(gv.group, gv.signature, tuple(A), tuple(B), tuple(C))


def apply_word(gv: GeneratingVector, word: Sequence[Move]) -> GeneratingVector:
    for m in word:
        gv = apply_move(gv, m)
    return gv


def inverse_word(m: Move) -> list[Move]:
    if m.kind == "R":
        return [m, m, m]
    if m.kind in "ST":
        return [m]
    return [Move(m.kind, m.i, m.j, -m.k)]


def unit_moves(sig: Signature) -> list[Move]:
    """Every single move with k = +-1 applicable to the signature."""
    rho, per = sig.rho, sig.periods
    out = []
    for i in range(1, rho + 1):
        for k in (1, -1):
            out += [Move("A", i, k=k), Move("B", i, k=k)]
            if i < rho:
                out.append(Move("Z", i, k=k))
            for j in range(1, len(per) + 1):
                out += [Move("U", i, j, k), Move("V", i, j, k)]
        out.append(Move("R", i))
        if i < rho:
            out.append(Move("S", i))
    out += [Move("T", j=j) for j in range(1, len(per)) if per[j - 1] == per[j]]
    return out


@dataclass(frozen=True)
class CupInvariant:
    value: TensorSquareElement


def cup_invariant(gv: GeneratingVector) -> CupInvariant:
    G = gv.group
    total = TensorSquareElement.zero(G)
    for a, b in zip(gv.A, gv.B):
        total = total + tensor_square(G, a, b) - tensor_square(G, b, a)
    return CupInvariant(total)


def _wedge_subgroup(G: AbelianGroup, C: Sequence[AbElement]) -> list[TensorSquareElement]:
    """Elements of the subgroup of G (x) G spanned by x (x) c - c (x) x, x in G, c among the C's."""
    gens = [tensor_square(G, G.gen(i), c) - tensor_square(G, c, G.gen(i)) for i in range(G.rank) for c in C]
    zero = TensorSquareElement.zero(G)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return list(seen)


def reduced_cup_invariant(gv: GeneratingVector) -> CupInvariant:
    """The cup element modulo the wedges with the elliptic images.

    U and V moves add k (A_i (x) C_j - C_j (x) A_i) to the plain cup element,
    so for vectors with branch points only this coset is invariant under all
    eight move kinds. The least coset member is returned.
    """
    c = cup_invariant(gv).value
    if not gv.C:
        return CupInvariant(c)
    return CupInvariant(min((c + w for w in _wedge_subgroup(gv.group, gv.C)), key=lambda t: t.coords))


def cup_equivalent_mod_aut(gv1: GeneratingVector, gv2: GeneratingVector, ceiling: int = 10**4) -> bool:
    """True iff some automorphism theta carries cup(gv1) to cup(gv2)."""
    if gv1.group != gv2.group:
        raise ValueError("generating vectors over different groups")
    c1, c2 = cup_invariant(gv1).value, cup_invariant(gv2).value
    if c1 == c2:
        return True
    return any(c1.transform(theta) == c2 for theta in enumerate_automorphisms(gv1.group, ceiling))


# Vectorised oracle ---------------------------------------------------------

class _Codec:
    """Tuples of element indices <-> integer codes, first coordinate most significant."""

    def __init__(self, n: int, k: int):
        self.n, self.k = n, k
        self.weights = np.array([n ** (k - 1 - i) for i in range(k)], dtype=np.int64)

    def decode(self, codes: np.ndarray) -> np.ndarray:
        out = np.empty((codes.size, self.k), dtype=np.int64)
        c = codes.astype(np.int64)
        for i in range(self.k - 1, -1, -1):
            out[:, i] = c % self.n
            c = c // self.n
        return out

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.weights


def _digit_maps(G: AbelianGroup, sig: Signature, auts: Sequence[AbAutomorphism]) -> list[tuple[str, Callable]]:
    """Generators of the equivalence as in-place maps on digit arrays."""
    rho, per = sig.rho, sig.periods
    add, neg = G.add_table, G.neg_table
    a = lambda i: i
    b = lambda i: rho + i
    c = lambda j: 2 * rho + j
    maps: list[tuple[str, Callable]] = []

    def addto(dst, src, sign=1):
        def f(d):
            s = d[:, src] if sign == 1 else neg[d[:, src]]
            d[:, dst] = add[d[:, dst], s]
        return f

    for i in range(rho):
        maps.append((f"A{i + 1}", addto(b(i), a(i))))
        maps.append((f"B{i + 1}", addto(a(i), b(i))))

        def rot(d, i=i):
            x = d[:, a(i)].copy()
            d[:, a(i)] = d[:, b(i)]
            d[:, b(i)] = neg[x]
        maps.append((f"R{i + 1}", rot))
        if i + 1 < rho:
            def zed(d, i=i):
                d[:, a(i)] = add[d[:, a(i)], d[:, a(i + 1)]]
                d[:, b(i + 1)] = add[d[:, b(i + 1)], neg[d[:, b(i)]]]
            maps.append((f"Z{i + 1}", zed))

            def swap(d, i=i):
                d[:, [a(i), a(i + 1), b(i), b(i + 1)]] = d[:, [a(i + 1), a(i), b(i + 1), b(i)]]
            maps.append((f"S{i + 1}", swap))
        for j in range(len(per)):
            maps.append((f"U{i + 1},{j + 1}", addto(b(i), c(j))))
            maps.append((f"V{i + 1},{j + 1}", addto(a(i), c(j))))
    # transpositions of consecutive equal periods generate every order-preserving permutation
    by_period: dict[int, list[int]] = {}
    for j, m in enumerate(per):
        by_period.setdefault(m, []).append(j)
    for js in by_period.values():
        for j1, j2 in zip(js, js[1:]):
            def tr(d, j1=j1, j2=j2):
                d[:, [c(j1), c(j2)]] = d[:, [c(j2), c(j1)]]
            maps.append((f"T{j1 + 1},{j2 + 1}", tr))
    for n, theta in enumerate(auts):
        perm = theta.perm

        def aut(d, perm=perm):
            d[:] = perm[d]
        maps.append((f"aut{n}", aut))
    return maps


def enumerate_valid_codes(G: AbelianGroup, sig: Signature, ceiling: int = ORACLE_CEILING,
                          chunk: int = 1 << 20) -> np.ndarray:
    """Sorted codes of every valid generating vector."""
    n, k = G.order, 2 * sig.rho + sig.branch_count
    total = n**k
    if total > ceiling:
        raise CeilingExceeded(f"oracle over {G} with signature {sig}", total, ceiling)
    codec = _Codec(n, k)
    per = np.array(sig.periods, dtype=np.int64)
    out = []
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        d = codec.decode(codes)
        ok = np.ones(codes.size, dtype=bool)
        if sig.branch_count:
            cs = d[:, 2 * sig.rho:]
            ok &= (G.order_table[cs] == per[None, :]).all(axis=1)
            s = cs[:, 0]
            for j in range(1, cs.shape[1]):
                s = G.add_table[s, cs[:, j]]
            ok &= s == 0
        sel = np.nonzero(ok)[0]
        if sel.size:
            sel = sel[G.generates_batch(d[sel])]
        out.append(codes[sel])
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


@dataclass
class OrbitPartition:
    group: AbelianGroup
    signature: Signature
    codes: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return orbit_count(self.labels)

    @property
    def valid_count(self) -> int:
        return int(self.codes.size)

    def _codec(self) -> _Codec:
        return _Codec(self.group.order, 2 * self.signature.rho + self.signature.branch_count)

    def representatives(self) -> list[GeneratingVector]:
        """Lexicographically least member of each orbit, in increasing order."""
        roots = np.unique(self.labels)
        digits = self._codec().decode(self.codes[roots])
        return [GeneratingVector.from_indices(self.group, self.signature, row) for row in digits]

    def orbit_sizes(self) -> dict[int, int]:
        roots, counts = np.unique(self.labels, return_counts=True)
        return dict(zip(roots.tolist(), counts.tolist()))

    def orbit_of(self, gv: GeneratingVector) -> int:
        """Root index of the orbit containing gv."""
        code = int(self._codec().encode(np.array([gv.indices()], dtype=np.int64))[0])
        pos = int(np.searchsorted(self.codes, code))
        if pos >= self.codes.size or self.codes[pos] != code:
            raise ValueError("not a valid generating vector")
        return int(self.labels[pos])


def orbit_classes_oracle(G: AbelianGroup, sig: Signature, ceiling: int = ORACLE_CEILING,
                         shuffle_seed: int | None = None) -> OrbitPartition:
    """Exhaustive orbit partition of valid generating vectors under moves and Aut(G).

    The moves are used with k = +1 only: for bijections of a finite set the
    orbits of the generated group are the connected components of the
    generator graph, so inverses add nothing. Aut(G) enters through a
    generating set.
    """
    codes = enumerate_valid_codes(G, sig, ceiling)
    codec = _Codec(G.order, 2 * sig.rho + sig.branch_count)
    maps = _digit_maps(G, sig, automorphism_generators(G))
    if shuffle_seed is not None:
        order = np.random.default_rng(shuffle_seed).permutation(len(maps))
        maps = [maps[i] for i in order]

    def as_code_map(f):
        def g(cs):
            d = codec.decode(cs)
            f(d)
            return codec.encode(d)
        return g

    labels = orbit_labels(codes, [as_code_map(f) for _, f in maps]) if codes.size else codes
    return OrbitPartition(G, sig, codes, labels)


def all_tuples(G: AbelianGroup, k: int):
    """Every k-tuple of elements (small groups only)."""
    return product(list(G.elements()), repeat=k)
