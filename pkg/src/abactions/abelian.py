"""Finite abelian groups in invariant-factor form, automorphisms, tensor squares,
signatures and Riemann-Hurwitz bookkeeping.

Elements are residue vectors. Each group also numbers its elements by a mixed
radix index with the first coordinate most significant, so index order agrees
with lexicographic order of residue vectors.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod

import numpy as np

from .errors import CeilingExceeded, InfeasibleSignature
from .ff import FpMatrix, batch_rank, gl_generators, is_prime

AUT_CEILING = 10**4


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class AbElement:
    coords: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.moduli):
            raise ValueError("coordinate/modulus length mismatch")
        if any(not 0 <= c < n for c, n in zip(self.coords, self.moduli)):
            raise ValueError(f"coordinates {self.coords} not reduced mod {self.moduli}")

    def _new(self, coords: Iterable[int]) -> AbElement:
        return AbElement(tuple(c % n for c, n in zip(coords, self.moduli)), self.moduli)

    def __add__(self, other: AbElement) -> AbElement:
        return self._new(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: AbElement) -> AbElement:
        return self._new(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> AbElement:
        return self._new(-a for a in self.coords)

    def __rmul__(self, k: int) -> AbElement:
        return self._new(k * a for a in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        return lcm(*(n // gcd(c, n) for c, n in zip(self.coords, self.moduli))) if self.coords else 1

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class AbelianGroup:
    """C_{n_1} x ... x C_{n_t} with n_{i+1} | n_i and every n_i >= 2."""

    factors: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(n) for n in self.factors)
        object.__setattr__(self, "factors", f)
        if any(n < 2 for n in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")
        if any(f[i] % f[i + 1] for i in range(len(f) - 1)):
            raise ValueError(f"invariant factors must form a divisibility chain: {f}")

    @classmethod
    def elementary(cls, p: int, w: int) -> AbelianGroup:
        return cls((p,) * w)

    @classmethod
    def parse(cls, text: str) -> AbelianGroup:
        return cls(tuple(int(x) for x in text.replace(" ", "").split(",") if x))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[0] if self.factors else 1

    def is_elementary(self) -> bool:
        return bool(self.factors) and len(set(self.factors)) == 1 and is_prime(self.factors[0])

    def __str__(self) -> str:
        return "x".join(f"C{n}" for n in self.factors) or "1"

    def element(self, coords: Sequence[int]) -> AbElement:
        return AbElement(tuple(int(c) % n for c, n in zip(coords, self.factors)), self.factors)

    def zero(self) -> AbElement:
        return self.element([0] * self.rank)

    def gen(self, i: int) -> AbElement:
        """The standard generator omega_{i+1} (0-based i)."""
        return self.element([int(j == i) for j in range(self.rank)])

    def index(self, x: AbElement) -> int:
        k = 0
        for c, n in zip(x.coords, self.factors):
            k = k * n + c
        return k

    def from_index(self, k: int) -> AbElement:
        out = []
        for n in reversed(self.factors):
            out.append(k % n)
            k //= n
        return AbElement(tuple(reversed(out)), self.factors)

    def elements(self) -> Iterator[AbElement]:
        for k in range(self.order):
            yield self.from_index(k)

    @cached_property
    def coord_table(self) -> np.ndarray:
        """coords of element k, shape (|G|, t)."""
        k = np.arange(self.order, dtype=np.int64)
        out = np.empty((self.order, self.rank), dtype=np.int64)
        for i in range(self.rank - 1, -1, -1):
            out[:, i] = k % self.factors[i]
            k //= self.factors[i]
        return out

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Element indices for an array of coordinate rows (last axis t)."""
        k = np.zeros(coords.shape[:-1], dtype=np.int64)
        for i, n in enumerate(self.factors):
            k = k * n + coords[..., i] % n
        return k

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coord_table
        return self.encode(c[:, None, :] + c[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.encode(-self.coord_table)

    @cached_property
    def order_table(self) -> np.ndarray:
        c = self.coord_table
        n = np.array(self.factors, dtype=np.int64)
        per = n[None, :] // np.gcd(c, n[None, :])
        return np.lcm.reduce(per, axis=1) if self.rank else np.ones(1, dtype=np.int64)

    def frattini_maps(self) -> list[tuple[int, np.ndarray]]:
        """For each prime l | |G|, the image of every element in G/lG = F_l^d."""
        out = []
        if not self.factors:
            return out
        for ell in prime_factors(self.factors[0]):
            cols = [i for i, n in enumerate(self.factors) if n % ell == 0]
            out.append((ell, self.coord_table[:, cols] % ell))
        return out

    def generates(self, elems: Sequence[AbElement]) -> bool:
        """True iff the elements generate G (checked on every Frattini quotient)."""
        idx = np.array([[self.index(x) for x in elems]], dtype=np.int64)
        return bool(self.generates_batch(idx)[0])

    def generates_batch(self, idx: np.ndarray) -> np.ndarray:
        """Vectorised `generates` for rows of element indices, shape (N, k)."""
        ok = np.ones(idx.shape[0], dtype=bool)
        for ell, fm in self.frattini_maps():
            d = fm.shape[1]
            if idx.shape[1] < d:
                return np.zeros(idx.shape[0], dtype=bool)
            mats = np.transpose(fm[idx], (0, 2, 1))
            ok &= batch_rank(mats, ell) == d
        return ok

    def vector_space_view(self, x: AbElement) -> tuple[int, ...]:
        if not self.is_elementary():
            raise ValueError("vector-space view needs an elementary abelian group")
        return x.coords


@dataclass(frozen=True)
class AbAutomorphism:
    """Integer matrix whose column j is the image of the j-th standard generator."""

    group: AbelianGroup
    matrix: tuple[tuple[int, ...], ...]
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        G = self.group
        m = tuple(tuple(int(x) % G.factors[i] for x in row) for i, row in enumerate(self.matrix))
        object.__setattr__(self, "matrix", m)
        if self.validate:
            for j, nj in enumerate(G.factors):
                col = G.element([m[i][j] for i in range(G.rank)])
                if nj % col.order():
                    raise ValueError(f"image of generator {j + 1} has order {col.order()} not dividing {nj}")
            perm = self.perm
            if np.unique(perm).size != G.order:
                raise ValueError("matrix does not induce a bijection")

    @classmethod
    def identity(cls, G: AbelianGroup) -> AbAutomorphism:
        return cls(G, tuple(tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)), validate=False)

    @classmethod
    def from_images(cls, G: AbelianGroup, images: Sequence[AbElement], validate: bool = True) -> AbAutomorphism:
        return cls(G, tuple(tuple(x.coords[i] for x in images) for i in range(G.rank)), validate)

    @cached_property
    def perm(self) -> np.ndarray:
        """perm[k] = index of the image of element k."""
        G = self.group
        M = np.array(self.matrix, dtype=np.int64).reshape(G.rank, G.rank)
        return G.encode(G.coord_table @ M.T)

    def __call__(self, x: AbElement) -> AbElement:
        G = self.group
        return G.element([sum(self.matrix[i][j] * x.coords[j] for j in range(G.rank)) for i in range(G.rank)])

    def __mul__(self, other: AbAutomorphism) -> AbAutomorphism:
        """(self * other)(x) = self(other(x))."""
        G = self.group
        cols = [self(other(G.gen(j))) for j in range(G.rank)]
        return AbAutomorphism.from_images(G, cols, validate=False)

    def key(self) -> bytes:
        return self.perm.tobytes()


def _elements_of_order_dividing(G: AbelianGroup, n: int) -> list[int]:
    return [int(k) for k in np.nonzero(n % G.order_table == 0)[0]]


def enumerate_automorphisms(G: AbelianGroup, ceiling: int = AUT_CEILING) -> Iterator[AbAutomorphism]:
    """Every automorphism of G exactly once, found by extending generator images."""
    if G.order > ceiling:
        raise CeilingExceeded(f"Aut({G}) enumeration", G.order, ceiling)
    t = G.rank
    add = G.add_table
    cands = [_elements_of_order_dividing(G, n) for n in G.factors]

    def extend(j: int, chosen: list[int], sub: frozenset[int]):
        if j == t:
            yield AbAutomorphism.from_images(G, [G.from_index(k) for k in chosen], validate=False)
            return
        n = G.factors[j]
        for c in cands[j]:
            mult, ok = [0], True
            for _ in range(n - 1):
                m = int(add[mult[-1], c])
                if m in sub:
                    ok = False
                    break
                mult.append(m)
            if not ok:
                continue
            new = frozenset(int(add[s, m]) for s in sub for m in mult)
            yield from extend(j + 1, chosen + [c], new)

    yield from extend(0, [], frozenset([0]))


def automorphism_generators(G: AbelianGroup, ceiling: int = AUT_CEILING) -> list[AbAutomorphism]:
    """A generating set of Aut(G).

    Elementary groups use the standard generators of GL(w,p). Otherwise the
    full group is enumerated and a generating subset picked greedily.
    """
    if G.is_elementary():
        p = G.factors[0]
        return [AbAutomorphism(G, tuple(map(tuple, g.tolist()))) for g in gl_generators(G.rank, p)]
    auts = list(enumerate_automorphisms(G, ceiling))
    gens: list[AbAutomorphism] = []
    reached = {AbAutomorphism.identity(G).key()}
    for a in auts:
        if a.key() in reached:
            continue
        gens.append(a)
        reached = _perm_closure([g.perm for g in gens])
        if len(reached) == len(auts):
            break
    return gens


def _perm_closure(perms: Sequence[np.ndarray]) -> set[bytes]:
    e = np.arange(perms[0].size, dtype=np.int64)
    seen = {e.tobytes()}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in perms:
                y = g[x]
                k = y.tobytes()
                if k not in seen:
                    seen.add(k)
                    nxt.append(y)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class TensorSquareElement:
    """Element of G (x) G; coordinate (i, j) lives mod gcd(n_i, n_j)."""

    group: AbelianGroup
    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        f = self.group.factors
        c = tuple(tuple(int(self.coords[i][j]) % gcd(f[i], f[j]) for j in range(len(f))) for i in range(len(f)))
        object.__setattr__(self, "coords", c)

    @classmethod
    def zero(cls, G: AbelianGroup) -> TensorSquareElement:
        return cls(G, tuple((0,) * G.rank for _ in range(G.rank)))

    def __add__(self, other: TensorSquareElement) -> TensorSquareElement:
        t = self.group.rank
        return TensorSquareElement(self.group, tuple(tuple(self.coords[i][j] + other.coords[i][j] for j in range(t)) for i in range(t)))

    def __neg__(self) -> TensorSquareElement:
        return TensorSquareElement(self.group, tuple(tuple(-x for x in row) for row in self.coords))

    def __sub__(self, other: TensorSquareElement) -> TensorSquareElement:
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.coords)

    def transform(self, theta: AbAutomorphism) -> TensorSquareElement:
        """(theta (x) theta) applied to this tensor."""
        G = self.group
        out = TensorSquareElement.zero(G)
        imgs = [theta(G.gen(i)) for i in range(G.rank)]
        for i in range(G.rank):
            for j in range(G.rank):
                c = self.coords[i][j]
                if c:
                    t = tensor_square(G, imgs[i], imgs[j])
                    out = out + TensorSquareElement(G, tuple(tuple(c * x for x in row) for row in t.coords))
        return out


def tensor_square(G: AbelianGroup, x: AbElement, y: AbElement) -> TensorSquareElement:
    """Elementary tensor x (x) y."""
    t = G.rank
    return TensorSquareElement(G, tuple(tuple(x.coords[i] * y.coords[j] for j in range(t)) for i in range(t)))


@dataclass(frozen=True)
class Signature:
    """(rho; m_1, ..., m_r): orbit genus and branching orders."""

    rho: int
    periods: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(int(m) for m in self.periods))
        if self.rho < 0:
            raise ValueError("orbit genus must be >= 0")
        if any(m < 2 for m in self.periods):
            raise ValueError("periods must be >= 2")

    @property
    def branch_count(self) -> int:
        return len(self.periods)

    @classmethod
    def parse(cls, text: str) -> Signature:
        """Parse "rho;m1,m2,..." with "-" for no periods."""
        text = text.strip().strip("()")
        if ";" not in text:
            raise ValueError(f"signature needs 'rho;periods': {text!r}")
        rho_s, per_s = text.split(";", 1)
        per_s = per_s.strip()
        periods = () if per_s in ("", "-") else tuple(int(x) for x in per_s.split(","))
        return cls(int(rho_s), periods)

    def __str__(self) -> str:
        return f"({self.rho};{','.join(map(str, self.periods)) or '-'})"


def genus_from_signature(group_order: int, sig: Signature) -> int | Fraction:
    """Surface genus from Riemann-Hurwitz.

    Returns an int when the genus is integral. A Fraction return value means
    the signature is infeasible for this order; see `require_genus`.
    """
    if group_order < 1:
        raise ValueError("group order must be >= 1")
    rhs = Fraction(2 * sig.rho - 2 + sig.branch_count) - sum(Fraction(1, m) for m in sig.periods)
    sigma = (group_order * rhs + 2) / 2
    return int(sigma) if sigma.denominator == 1 else sigma


def require_genus(group_order: int, sig: Signature) -> int:
    g = genus_from_signature(group_order, sig)
    if not isinstance(g, int):
        raise InfeasibleSignature(f"signature {sig} with |G|={group_order} gives non-integral genus {g}")
    return g


def elementary_fpmatrix(G: AbelianGroup, elems: Sequence[AbElement]) -> FpMatrix:
    """Columns are the given elements of F_p^w."""
    p = G.factors[0]
    return FpMatrix(np.array([x.coords for x in elems], dtype=np.int64).T.reshape(G.rank, len(elems)), p)
