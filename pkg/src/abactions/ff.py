"""Exact linear algebra over prime fields.

Matrices are small dense numpy int64 arrays reduced mod p after every
operation. Elimination always picks the leftmost pivot, so RREF forms are
reproducible and usable as canonical labels.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from math import prod

import numpy as np

from .errors import CeilingExceeded

GL_CEILING = 2**24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


def inverse_table(p: int) -> np.ndarray:
    """inv[a] = a^-1 mod p for a != 0, inv[0] = 0."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, -1, p)
    return inv


class FpMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int):
        if p < 2 or p > 2**31:
            raise ValueError(f"unsupported modulus {p}")
        a = np.array(entries, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("FpMatrix needs a 2-d array")
        a = a % p
        a.setflags(write=False)
        self.a = a
        self.p = p

    @classmethod
    def identity(cls, n: int, p: int) -> FpMatrix:
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> FpMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def T(self) -> FpMatrix:
        return FpMatrix(self.a.T, self.p)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.a[:, j])

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def _check(self, other: FpMatrix) -> None:
        if self.p != other.p:
            raise ValueError("moduli differ")

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return FpMatrix(self.a @ other.a, self.p)

    def __add__(self, other: FpMatrix) -> FpMatrix:
        self._check(other)
        return FpMatrix(self.a + other.a, self.p)

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        self._check(other)
        return FpMatrix(self.a - other.a, self.p)

    def __neg__(self) -> FpMatrix:
        return FpMatrix(-self.a, self.p)

    def scale(self, c: int) -> FpMatrix:
        return FpMatrix(self.a * c, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix({self.a.tolist()}, p={self.p})"

    def key(self) -> tuple:
        """Hashable, orderable label."""
        return (self.shape, tuple(self.a.ravel().tolist()))

    def rank(self) -> int:
        return rank(self)

    def rref(self) -> tuple[FpMatrix, list[int]]:
        return rref(self)

    def inverse(self) -> FpMatrix:
        return inverse(self)

    def det(self) -> int:
        return det(self)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and rank(self) == self.rows


def _rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a.copy() % p
    m, n = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        a[row] = a[row] * pow(int(a[row, col]), -1, p) % p
        f = a[:, col].copy()
        f[row] = 0
        a = (a - np.outer(f, a[row])) % p
        pivots.append(col)
        row += 1
    return a, pivots


def rref(M: FpMatrix) -> tuple[FpMatrix, list[int]]:
    """Reduced row echelon form and pivot columns (leftmost-pivot rule)."""
    a, piv = _rref_array(M.a, M.p)
    return FpMatrix(a, M.p), piv


def rank(M: FpMatrix) -> int:
    if M.a.size == 0:
        return 0
    return len(_rref_array(M.a, M.p)[1])


def kernel_basis(M: FpMatrix) -> list[tuple[int, ...]]:
    """Basis of the right null space {x : Mx = 0}."""
    p = M.p
    n = M.cols
    if M.rows == 0:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    a, piv = _rref_array(M.a, p)
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        x = [0] * n
        x[f] = 1
        for i, pc in enumerate(piv):
            x[pc] = int(-a[i, f] % p)
        basis.append(tuple(x))
    return basis


def solve(M: FpMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One solution of Mx = b, or None when inconsistent."""
    p = M.p
    aug = np.concatenate([M.a, np.array(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    a, piv = _rref_array(aug, p)
    if M.cols in piv:
        return None
    x = [0] * M.cols
    for i, pc in enumerate(piv):
        x[pc] = int(a[i, -1])
    return tuple(x)


def inverse(M: FpMatrix) -> FpMatrix:
    n = M.rows
    if M.cols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([M.a, np.eye(n, dtype=np.int64)], axis=1)
    a, piv = _rref_array(aug, M.p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return FpMatrix(a[:, n:], M.p)


def det(M: FpMatrix) -> int:
    n = M.rows
    if M.cols != n:
        raise ValueError("determinant of a non-square matrix")
    p = M.p
    a = M.a.copy()
    d = 1
    for col in range(n):
        nz = np.nonzero(a[col:, col])[0]
        if nz.size == 0:
            return 0
        piv = col + int(nz[0])
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            d = -d
        d = d * int(a[col, col]) % p
        inv = pow(int(a[col, col]), -1, p)
        for r in range(col + 1, n):
            a[r] = (a[r] - a[r, col] * inv * a[col]) % p
    return d % p


def gl_order(v: int, p: int) -> int:
    return prod(p**j - 1 for j in range(1, v + 1)) * p ** ((v * v - v) // 2)


def subspace_count(v: int, l: int, p: int) -> int:
    """Number n_{v,l} of l-dimensional subspaces of F_p^v."""
    if not 0 <= l <= v:
        raise ValueError(f"need 0 <= l <= v, got l={l}, v={v}")
    num = prod(p**j - 1 for j in range(l + 1, v + 1))
    den = prod(p**j - 1 for j in range(1, v - l + 1))
    return num // den


def batch_rank(arr: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices, shape (N, m, n), over F_p."""
    a = np.array(arr, dtype=np.int64) % p
    N, m, n = a.shape
    rk = np.zeros(N, dtype=np.int64)
    if N == 0 or m == 0:
        return rk
    inv = inverse_table(p)
    ridx = np.arange(m)
    for c in range(n):
        cand = (a[:, :, c] != 0) & (ridx[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        sel = np.nonzero(has)[0]
        if sel.size == 0:
            continue
        piv = np.argmax(cand[sel], axis=1)
        r0 = rk[sel]
        sub = a[sel]
        k = np.arange(sel.size)
        top = sub[k, piv].copy()
        sub[k, piv] = sub[k, r0]
        top = top * inv[top[:, c]][:, None] % p
        sub[k, r0] = top
        f = sub[:, :, c].copy()
        f[k, r0] = 0
        sub = (sub - f[:, :, None] * top[:, None, :]) % p
        a[sel] = sub
        rk[sel] += 1
        if (rk == m).all():
            break
    return rk


def decode_digits(codes: np.ndarray, base: int, width: int) -> np.ndarray:
    """Little-endian base-`base` digits of each code, shape (N, width)."""
    out = np.empty((codes.size, width), dtype=np.int64)
    c = codes.astype(np.int64)
    for i in range(width):
        out[:, i] = c % base
        c = c // base
    return out


def gl_array(v: int, p: int, ceiling: int = GL_CEILING, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """Chunks of invertible v x v matrices, shape (k, v, v), in code order."""
    total = p ** (v * v)
    if total > ceiling:
        raise CeilingExceeded(f"GL({v},{p}) enumeration", total, ceiling)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        mats = decode_digits(codes, p, v * v).reshape(-1, v, v)
        keep = batch_rank(mats, p) == v
        if keep.any():
            yield mats[keep]


def enumerate_gl(v: int, p: int, ceiling: int = GL_CEILING) -> Iterator[FpMatrix]:
    """Every invertible v x v matrix over F_p exactly once."""
    for block in gl_array(v, p, ceiling):
        for m in block:
            yield FpMatrix(m, p)


def gl_generators(v: int, p: int) -> list[np.ndarray]:
    """A generating set of GL(v,p): diag(g,1,..), the transvection I+E_12 and a row cycle."""
    gens = []
    d = np.eye(v, dtype=np.int64)
    d[0, 0] = primitive_root(p)
    if p > 2:
        gens.append(d)
    if v >= 2:
        t = np.eye(v, dtype=np.int64)
        t[0, 1] = 1
        gens.append(t)
        gens.append(np.roll(np.eye(v, dtype=np.int64), 1, axis=0))
    if not gens:
        gens.append(np.eye(v, dtype=np.int64))
    return gens


def count_invertible_in_span(basis: Sequence[np.ndarray], v: int, p: int, ceiling: int = 2**26,
                             chunk: int = 1 << 18) -> int:
    """Count invertible matrices in the F_p-span of the given v x v basis matrices."""
    d = len(basis)
    if d == 0:
        return 1 if v == 0 else 0
    total = p**d
    if total > ceiling:
        raise CeilingExceeded("matrix-span enumeration", total, ceiling)
    B = np.stack([np.asarray(b, dtype=np.int64).reshape(v * v) for b in basis])
    count = 0
    for start in range(0, total, chunk):
        coeffs = decode_digits(np.arange(start, min(total, start + chunk)), p, d)
        mats = (coeffs @ B % p).reshape(-1, v, v)
        count += int((batch_rank(mats, p) == v).sum())
    return count


def find_invertible_in_span(basis: Sequence[np.ndarray], v: int, p: int, exhaustive_limit: int = 2**20,
                            samples: int = 4096, seed: int = 0) -> np.ndarray | None:
    """Some invertible element of the span, or None if none exists.

    A seeded random sample is tried first (a larger one for big spans);
    failure escalates to a chunked full search, so the answer is never
    probabilistic.
    """
    d = len(basis)
    if d == 0:
        return np.eye(0, dtype=np.int64) if v == 0 else None
    B = np.stack([np.asarray(b, dtype=np.int64).reshape(v * v) for b in basis])
    for b in B:
        if batch_rank(b.reshape(1, v, v), p)[0] == v:
            return b.reshape(v, v) % p
    total = p**d
    rng = np.random.default_rng(seed)
    for n in (64, samples) if total > exhaustive_limit else (64,):
        mats = (rng.integers(0, p, size=(n, d)) @ B % p).reshape(-1, v, v)
        ok = np.nonzero(batch_rank(mats, p) == v)[0]
        if ok.size:
            return mats[ok[0]]
    chunk = 1 << 14
    for start in range(0, total, chunk):
        coeffs = decode_digits(np.arange(start, min(total, start + chunk)), p, d)
        mats = (coeffs @ B % p).reshape(-1, v, v)
        ok = np.nonzero(batch_rank(mats, p) == v)[0]
        if ok.size:
            return mats[ok[0]]
    return None


def span_elements(basis: Sequence[Iterable[int]], p: int) -> np.ndarray:
    """All F_p-combinations of the basis vectors, shape (p^d, n)."""
    B = np.array([list(b) for b in basis], dtype=np.int64)
    d = B.shape[0]
    coeffs = decode_digits(np.arange(p**d), p, d)
    return coeffs @ B % p
