"""The space Omega of totally ramified elementary abelian actions and its GL x S_r action.

A point is a v x r matrix X over F_p of rank v whose columns are nonzero and
sum to zero. (g, a) acts by X -> g X pi_a^T, so column i of the image is
g X_{a(i)}.
"""
from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

import numpy as np

from ..errors import CeilingExceeded, OutOfScope
from ..ff import FpMatrix, batch_rank, decode_digits, gl_generators, gl_order, is_prime, subspace_count
from ..orbits import orbit_count, orbit_labels
from ..perms import Perm, perm_matrix

ENUM_CEILING = 2**26


@dataclass(frozen=True)
class OmegaMatrix:
    X: FpMatrix

    def __post_init__(self):
        X = self.X
        if X.rank() != X.rows:
            raise ValueError("X must have rank v")
        if any(not any(X.column(i)) for i in range(X.cols)):
            raise ValueError("every column of X must be nonzero")
        if np.any(X.a.sum(axis=1) % X.p):
            raise ValueError("columns of X must sum to zero")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> OmegaMatrix:
        return cls(FpMatrix(rows, p))

    @property
    def v(self) -> int:
        return self.X.rows

    @property
    def r(self) -> int:
        return self.X.cols

    @property
    def p(self) -> int:
        return self.X.p

    def tolist(self) -> list[list[int]]:
        return self.X.tolist()


@dataclass(frozen=True)
class ActionElement:
    g: FpMatrix
    alpha: Perm

    def __post_init__(self):
        if not self.g.is_invertible():
            raise ValueError("g must be invertible")

    @classmethod
    def identity(cls, v: int, r: int, p: int) -> ActionElement:
        return cls(FpMatrix.identity(v, p), Perm.identity(r))

    def __mul__(self, other: ActionElement) -> ActionElement:
        """act(a * b, X) = act(a, act(b, X))."""
        return ActionElement(self.g @ other.g, self.alpha * other.alpha)

    def inverse(self) -> ActionElement:
        return ActionElement(self.g.inverse(), self.alpha.inverse())


def act(a: ActionElement, X: OmegaMatrix) -> OmegaMatrix:
    if a.g.rows != X.v or a.alpha.degree != X.r or a.g.p != X.p:
        raise ValueError("shape mismatch between action element and X")
    return OmegaMatrix(a.g @ X.X @ perm_matrix(a.alpha, X.p).T)


def group_order(v: int, r: int, p: int) -> int:
    return gl_order(v, p) * factorial(r)


# Counting -------------------------------------------------------------------

def omega_bar_count(v: int, r: int, p: int) -> int:
    """Tuples of r nonzero vectors of F_p^v summing to zero."""
    q = p**v
    val = Fraction((q - 1) ** r - (-1) ** r, q) + (-1) ** r
    assert val.denominator == 1
    return int(val)


@lru_cache(maxsize=None)
def omega_count(v: int, r: int, p: int) -> int:
    """|Omega|: the spanning tuples, by inversion over proper subspaces."""
    if v == 0:
        return 1 if r == 0 else 0
    return omega_bar_count(v, r, p) - sum(subspace_count(v, l, p) * omega_count(l, r, p) for l in range(1, v))


# Printed closed forms for |Omega| at small (v, r).
OMEGA_CLOSED_FORMS = {
    (1, 2): lambda p: p - 1,
    (1, 3): lambda p: (p - 1) * (p - 2),
    (1, 4): lambda p: (p - 1) * (p * p - 3 * p + 3),
    (1, 5): lambda p: (p - 1) * (p**3 - 4 * p * p + 6 * p - 4),
    (2, 3): lambda p: p * (p - 1) * (p * p - 1),
    (2, 4): lambda p: p * (p - 1) * (p * p - 1) * (p * p + p - 3),
    (2, 5): lambda p: p * (p - 1) * (p * p - 1) * (p**4 + p**3 - 3 * p * p - 4 * p + 6),
    (3, 4): lambda p: p**3 * (p - 1) * (p * p - 1) * (p**3 - 1),
}


def scaled_sum_count(coeffs: Sequence[int], v: int, p: int) -> int:
    """Full-rank tuples of nonzero vectors with sum a_i X_i = 0; rescaling columns makes this omega."""
    if any(a % p == 0 for a in coeffs):
        raise ValueError("coefficients must be nonzero mod p")
    return omega_count(v, len(coeffs), p)


def beta_n(n: int, p: int) -> int:
    """Number of primitive n-th roots of unity in F_p."""
    if (p - 1) % n:
        return 0
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


# Enumeration ----------------------------------------------------------------

def encode_matrices(mats: np.ndarray, p: int) -> np.ndarray:
    """Little-endian base-p code of each flattened matrix."""
    flat = mats.reshape(mats.shape[0], int(np.prod(mats.shape[1:]))).astype(np.int64)
    w = p ** np.arange(flat.shape[1], dtype=np.int64)
    return flat @ w


def decode_matrices(codes: np.ndarray, v: int, r: int, p: int) -> np.ndarray:
    return decode_digits(codes, p, v * r).reshape(-1, v, r)


def omega_array(v: int, r: int, p: int, ceiling: int = ENUM_CEILING, chunk: int = 1 << 20) -> np.ndarray:
    """Every X in Omega as an array (N, v, r), sorted by code.

    The first r-1 columns run over nonzero vectors; the last is minus their sum.
    """
    if r < 1:
        return np.zeros((0, v, r), dtype=np.int64)
    total = p ** (v * (r - 1))
    if total > ceiling:
        raise CeilingExceeded(f"Omega({v},{r},{p}) enumeration", total, ceiling)
    out = []
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        head = decode_digits(codes, p, v * (r - 1)).reshape(-1, r - 1, v).transpose(0, 2, 1)
        head = head[(head != 0).any(axis=1).all(axis=1)]
        last = (-head.sum(axis=2)) % p
        keep = (last != 0).any(axis=1)
        X = np.concatenate([head[keep], last[keep][:, :, None]], axis=2)
        X = X[batch_rank(X, p) == v]
        out.append(X)
    X = np.concatenate(out) if out else np.zeros((0, v, r), dtype=np.int64)
    return X[np.argsort(encode_matrices(X, p), kind="stable")]


def enumerate_omega(v: int, r: int, p: int, ceiling: int = ENUM_CEILING) -> Iterator[OmegaMatrix]:
    for X in omega_array(v, r, p, ceiling):
        yield OmegaMatrix(FpMatrix(X, p))


def omega_rref_array(v: int, r: int, p: int, ceiling: int = ENUM_CEILING) -> np.ndarray:
    """One point per GL(v,p)-orbit of Omega: the members already in reduced row echelon form."""
    from itertools import combinations

    out = []
    for piv in combinations(range(r), v):
        slots = [(a, j) for a in range(v) for j in range(piv[a] + 1, r) if j not in piv]
        total = p ** len(slots)
        if total > ceiling:
            raise CeilingExceeded(f"RREF({v},{r},{p}) enumeration", total, ceiling)
        coeffs = decode_digits(np.arange(total, dtype=np.int64), p, len(slots))
        X = np.zeros((total, v, r), dtype=np.int64)
        for a, j in enumerate(piv):
            X[:, a, j] = 1
        for k, (a, j) in enumerate(slots):
            X[:, a, j] = coeffs[:, k]
        X = X[((X.sum(axis=2) % p) == 0).all(axis=1) & (X != 0).any(axis=1).all(axis=1)]
        out.append(X)
    X = np.concatenate(out)
    return X[np.argsort(encode_matrices(X, p), kind="stable")]


def unique_when_r_is_v_plus_1(v: int, p: int) -> OmegaMatrix:
    """[I_v | -E_v], representing the single orbit when r = v + 1."""
    X = np.concatenate([np.eye(v, dtype=np.int64), -np.ones((v, 1), dtype=np.int64)], axis=1)
    return OmegaMatrix(FpMatrix(X, p))


# Brute-force oracle -------------------------------------------------------------

def _generator_maps(v: int, r: int, p: int):
    def left(g):
        def f(codes):
            X = decode_matrices(codes, v, r, p)
            return encode_matrices(np.einsum("ab,nbc->nac", g, X) % p, p)
        return f

    def swap(i):
        def f(codes):
            X = decode_matrices(codes, v, r, p)
            X[:, :, [i, i + 1]] = X[:, :, [i + 1, i]]
            return encode_matrices(X, p)
        return f

    return [left(g) for g in gl_generators(v, p)] + [swap(i) for i in range(r - 1)]


def orbit_partition_oracle(v: int, r: int, p: int, ceiling: int = ENUM_CEILING) -> tuple[np.ndarray, np.ndarray]:
    """(sorted codes of Omega, orbit label of each), by union-find over generators."""
    X = omega_array(v, r, p, ceiling)
    codes = encode_matrices(X, p)
    if codes.size == 0:
        return codes, codes
    return codes, orbit_labels(codes, _generator_maps(v, r, p))


def orbit_count_oracle(v: int, r: int, p: int, ceiling: int = ENUM_CEILING) -> int:
    """|Omega / (GL(v,p) x S_r)| by exhaustive enumeration."""
    _, labels = orbit_partition_oracle(v, r, p, ceiling)
    return orbit_count(labels) if labels.size else 0


# Closed forms for three and four branch points ----------------------------------------

TABLE51_PAIRS = ((3, 1), (3, 2), (4, 1), (4, 2), (4, 3))


def table51(r: int, v: int, p: int) -> int:
    """Published class counts of totally ramified F_p^v actions with r branch points."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if (r, v) not in TABLE51_PAIRS:
        raise OutOfScope(f"(r, v) = ({r}, {v}) is not tabulated")
    if v == r - 1:
        return 1
    if (r, v) == (3, 1):
        if p == 2:
            return 0
        if p == 3:
            return 1
        val = Fraction(p + 1, 6) if beta_n(3, p) == 0 else Fraction(p + 5, 6)
    elif (r, v) == (4, 1):
        if p in (2, 3):
            return 1
        val = Fraction(p * p + 6 * p + 5, 24) if beta_n(4, p) == 0 else Fraction(p * p + 6 * p + 17, 24)
    else:
        if p == 3:
            return 2
        if p == 2:
            raise OutOfScope("(r, v) = (4, 2) has no tabulated value at p = 2")
        const = {(0, 0): 9, (2, 0): 25, (0, 2): 21, (2, 2): 37}[(beta_n(3, p), beta_n(4, p))]
        val = Fraction(p * p + 10 * p + const, 24)
    if val.denominator != 1:
        raise AssertionError(f"non-integral closed form at p={p}")
    return int(val)
