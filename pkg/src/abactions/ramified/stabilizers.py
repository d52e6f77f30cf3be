"""Subgroups of GL(v,p) x S_r that fix points of Omega.

A point stabilizer H projects injectively to S_r, so it is the graph
{(q(a), a) : a in H'} of a representation q of H' = p2(H). Everything here is
decided with linear algebra over F_p itself: fixed sets and dominance through
intertwiner spaces, equivalence of representations through the existence of
an invertible intertwiner. No character tables or extension fields are used.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from ..errors import CeilingExceeded
from ..ff import (FpMatrix, batch_rank, count_invertible_in_span, decode_digits, find_invertible_in_span, gl_array,
                  gl_order, kernel_basis)
from ..perms import (Perm, PermSubgroup, _conj_key, all_subgroups, closure, normalizer_in_sym, perm_matrix,
                     subgroup_classes, symmetric_group)
from .omega import OmegaMatrix, omega_count, omega_rref_array

SPAN_CEILING = 2**26
SEARCH_LIMIT = 2**20


@dataclass(eq=False)
class SubgroupRecord:
    """H = {(q(a), a) : a in H'} with q stored as an explicit table."""

    H: PermSubgroup
    q: Mapping[Perm, FpMatrix]
    v: int
    p: int
    label: str | None = field(default=None)

    @property
    def order(self) -> int:
        return self.H.order

    @property
    def r(self) -> int:
        return self.H.degree

    def image(self, a: Perm) -> FpMatrix:
        return self.q[a]

    def generator_pairs(self) -> list[tuple[Perm, FpMatrix]]:
        gens = list(self.H.generators) or [Perm.identity(self.r)]
        return [(a, self.q[a]) for a in gens]

    def is_homomorphism(self) -> bool:
        return all(self.q[a * b] == self.q[a] @ self.q[b] for a in self.H.elements for b in self.H.elements)

    @cached_property
    def fixed_profile(self) -> tuple[int, ...]:
        """Dimensions of the fixed spaces of the q(a), largest first."""
        I = FpMatrix.identity(self.v, self.p)
        dims = [self.v - (self.q[a] - I).rank() for a in self.H.elements]
        return tuple(sorted(dims, reverse=True))

    def restrict(self, K: PermSubgroup) -> SubgroupRecord:
        return SubgroupRecord(K, {a: self.q[a] for a in K.elements}, self.v, self.p)

    def conjugate(self, g: FpMatrix, alpha: Perm) -> SubgroupRecord:
        """(g, alpha)^-1 H (g, alpha)."""
        gi = g.inverse()
        K = self.H.conjugate(alpha)
        q = {a.conj(alpha): gi @ m @ g for a, m in self.q.items()}
        return SubgroupRecord(K, q, self.v, self.p, self.label)

    def as_json(self) -> dict:
        return {
            "label": self.label,
            "order": self.order,
            "generators": [[list(c) for c in a.cycles()] for a in self.H.generators],
            "q": [m.tolist() for _, m in self.generator_pairs()],
        }


def record_from_generators(gens: Sequence[tuple[Perm, FpMatrix | Sequence[Sequence[int]]]], r: int, p: int,
                           label: str | None = None) -> SubgroupRecord:
    """Extend generator images to a table by closure; raises if they do not define a homomorphism."""
    pairs = [(a, m if isinstance(m, FpMatrix) else FpMatrix(m, p)) for a, m in gens]
    if not pairs:
        raise ValueError("need at least one generator (use the identity for the trivial group)")
    v = pairs[0][1].rows
    e = Perm.identity(r)
    table = {e: FpMatrix.identity(v, p)}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for a, m in pairs:
                y, my = x * a, table[x] @ m
                if y in table:
                    if table[y] != my:
                        raise ValueError("generator images do not define a homomorphism")
                else:
                    table[y] = my
                    nxt.append(y)
        frontier = nxt
    H = closure([a for a, _ in pairs], r)
    for a, m in pairs:
        if table[a] != m:
            raise ValueError("generator images do not define a homomorphism")
    rec = SubgroupRecord(H, table, v, p, label)
    if not rec.is_homomorphism():
        raise ValueError("generator images do not define a homomorphism")
    return rec


def trivial_record(v: int, r: int, p: int, label: str | None = None) -> SubgroupRecord:
    return record_from_generators([(Perm.identity(r), FpMatrix.identity(v, p))], r, p, label)


# Intertwiners -------------------------------------------------------------

def intertwiner_basis(pairs: Iterable[tuple[FpMatrix, FpMatrix]], m: int, n: int, p: int,
                      extra_rows: Sequence[Sequence[int]] = ()) -> list[np.ndarray]:
    """Basis of {Y (m x n) : A Y = Y B for every (A, B)}, optionally with extra linear constraints on vec(Y)."""
    rows = []
    Im, In = np.eye(m, dtype=np.int64), np.eye(n, dtype=np.int64)
    for A, B in pairs:
        rows.append(np.kron(A.a, In) - np.kron(Im, B.a.T))
    if extra_rows:
        rows.append(np.array(extra_rows, dtype=np.int64))
    if not rows:
        return [np.eye(m * n, dtype=np.int64)[k].reshape(m, n) for k in range(m * n)]
    M = FpMatrix(np.concatenate(rows), p)
    return [np.array(b, dtype=np.int64).reshape(m, n) for b in kernel_basis(M)]


def _span_chunks(basis: Sequence[np.ndarray], p: int, ceiling: int, chunk: int = 1 << 18):
    d = len(basis)
    total = p**d
    if total > ceiling:
        raise CeilingExceeded("intertwiner-space enumeration", total, ceiling)
    shape = basis[0].shape if basis else (0, 0)
    B = np.stack([b.reshape(-1) for b in basis]) if basis else np.zeros((0, 0), dtype=np.int64)
    for start in range(0, total, chunk):
        coeffs = decode_digits(np.arange(start, min(total, start + chunk), dtype=np.int64), p, d)
        yield (coeffs @ B % p).reshape(-1, *shape)


def _sum_zero_rows(v: int, r: int) -> list[list[int]]:
    """Linear constraints X E = 0 on vec(X), X of shape v x r."""
    rows = []
    for a in range(v):
        row = [0] * (v * r)
        for i in range(r):
            row[a * r + i] = 1
        rows.append(row)
    return rows


def fixed_space_basis(H: SubgroupRecord) -> list[np.ndarray]:
    """Basis of {X : q(a) X = X pi_a for a in H', columns summing to zero}."""
    pairs = [(m, perm_matrix(a, H.p)) for a, m in H.generator_pairs()]
    return intertwiner_basis(pairs, H.v, H.r, H.p, _sum_zero_rows(H.v, H.r))


def fixed_set_size(H: SubgroupRecord, v: int | None = None, r: int | None = None, p: int | None = None,
                   ceiling: int = SPAN_CEILING) -> int:
    """|Omega^H|, by walking the solution space of the fixed-point equations.

    The trivial group fixes all of Omega, so its count is taken from the
    closed form instead of a walk over p^(v(r-1)) matrices.
    """
    v, r, p = v or H.v, r or H.r, p or H.p
    if (v, r, p) != (H.v, H.r, H.p):
        raise ValueError("record does not match (v, r, p)")
    if H.order == 1:
        return omega_count(v, r, p)
    basis = fixed_space_basis(H)
    if not basis:
        return 0
    count = 0
    for X in _span_chunks(basis, p, ceiling):
        ok = (X != 0).any(axis=1).all(axis=1)
        X = X[ok]
        count += int((batch_rank(X, p) == v).sum())
    return count


def fixed_points(H: SubgroupRecord, ceiling: int = SPAN_CEILING) -> np.ndarray:
    """The members of Omega^H as an array (N, v, r)."""
    basis = fixed_space_basis(H)
    out = []
    for X in _span_chunks(basis, H.p, ceiling) if basis else []:
        X = X[(X != 0).any(axis=1).all(axis=1)]
        out.append(X[batch_rank(X, H.p) == H.v])
    return np.concatenate(out) if out else np.zeros((0, H.v, H.r), dtype=np.int64)


def _span_has(basis: Sequence[np.ndarray], p: int, pred, ceiling: int = SPAN_CEILING) -> bool:
    """Whether some element of the span satisfies pred (a batched boolean test)."""
    if not basis:
        return False
    if p ** len(basis) > SEARCH_LIMIT:
        rng = np.random.default_rng(0)
        B = np.stack([b.reshape(-1) for b in basis])
        X = (rng.integers(0, p, size=(4096, len(basis))) @ B % p).reshape(-1, *basis[0].shape)
        if pred(X).any():
            return True
    return any(pred(X).any() for X in _span_chunks(basis, p, ceiling))


@dataclass(frozen=True)
class FixedPointReport:
    fixed: bool
    fixed_count: int
    criterion_applies: bool
    dominated: bool | None
    common_irreducible: tuple[bool, ...] | None

    @property
    def criterion(self) -> bool | None:
        if self.dominated is None:
            return None
        return self.dominated and all(self.common_irreducible)


def has_fixed_point(H: SubgroupRecord, ceiling: int = SPAN_CEILING) -> FixedPointReport:
    """Decide whether H fixes a point of Omega and evaluate the stabilizer criterion.

    The criterion asks that q be dominated by the reduced permutation
    representation (a surjective intertwiner killing the all-ones vector) and
    that q share an irreducible with the permutation representation on every
    orbit (a nonzero intertwiner from that orbit). It applies when p does not
    divide |H'| and not (p = 2, v = 1).
    """
    count = fixed_set_size(H, ceiling=ceiling)
    applies = H.order % H.p != 0 and not (H.p == 2 and H.v == 1)
    if not applies:
        return FixedPointReport(count > 0, count, False, None, None)
    p, v = H.p, H.v
    basis = fixed_space_basis(H)
    dominated = _span_has(basis, p, lambda X: batch_rank(X, p) == v, ceiling)
    common = []
    for orb in H.H.orbits():
        idx = [i - 1 for i in orb]
        pairs = []
        for a, m in H.generator_pairs():
            sub = perm_matrix(a, p).a[np.ix_(idx, idx)]
            pairs.append((m, FpMatrix(sub, p)))
        common.append(bool(intertwiner_basis(pairs, v, len(idx), p)))
    return FixedPointReport(count > 0, count, True, dominated, tuple(common))


# Conjugacy and normalizers ------------------------------------------------------

def _equivalence_witness(pairs: Sequence[tuple[FpMatrix, FpMatrix]], v: int, p: int) -> np.ndarray | None:
    """Invertible g with A g = g B for every pair, or None."""
    if any(_charpoly_key(a.a, p) != _charpoly_key(b.a, p) for a, b in pairs):
        return None  # similar matrices share characteristic polynomials
    basis = intertwiner_basis(pairs, v, v, p)
    return find_invertible_in_span(basis, v, p, exhaustive_limit=SEARCH_LIMIT)


def conjugating_element(R1: SubgroupRecord, R2: SubgroupRecord) -> tuple[FpMatrix, Perm] | None:
    """(g, alpha) with (g, alpha)^-1 R1 (g, alpha) = R2, or None."""
    if R1.order != R2.order or R1.fixed_profile != R2.fixed_profile or (R1.v, R1.r, R1.p) != (R2.v, R2.r, R2.p):
        return None
    if _conj_key(R1.H) != _conj_key(R2.H):
        return None
    target = R2.H._set
    gens = R1.generator_pairs()
    for alpha in symmetric_group(R1.r):
        if any(h.conj(alpha) not in target for h in R1.H.elements):
            continue
        g = _equivalence_witness([(m, R2.q[a.conj(alpha)]) for a, m in gens], R1.v, R1.p)
        if g is not None:
            return FpMatrix(g, R1.p), alpha
    return None


def records_conjugate(R1: SubgroupRecord, R2: SubgroupRecord) -> bool:
    return conjugating_element(R1, R2) is not None


def centralizer_size(H: SubgroupRecord, ceiling: int = SPAN_CEILING) -> int:
    """|Z|, the centralizer of q(H') in GL(v,p)."""
    v, p = H.v, H.p
    if all(np.array_equal(m.a, (m.a[0, 0] * np.eye(v, dtype=np.int64)) % p) for m in H.q.values()):
        return gl_order(v, p)
    basis = intertwiner_basis([(m, m) for _, m in H.generator_pairs()], v, v, p)
    return count_invertible_in_span(basis, v, p, ceiling)


def normalizer_size(H: SubgroupRecord, ceiling: int = SPAN_CEILING) -> int:
    """|N_G(H)| = |Z| |N''| with N'' the part of N_{S_r}(H') preserving q up to equivalence."""
    Nprime = normalizer_in_sym(H.H)
    gens = H.generator_pairs()
    count = 0
    for alpha in Nprime.elements:
        if _equivalence_witness([(m, H.q[a.conj(alpha)]) for a, m in gens], H.v, H.p) is not None:
            count += 1
    return centralizer_size(H, ceiling) * count


# Point stabilizers and class discovery -------------------------------------------------

def point_stabilizer(X: OmegaMatrix) -> SubgroupRecord:
    """The full stabilizer of X; for each alpha at most one g works since X has rank v."""
    v, r, p = X.v, X.r, X.p
    _, piv = X.X.rref()
    Xa = X.X.a
    pairs = []
    for alpha in symmetric_group(r):
        Y = (X.X @ perm_matrix(alpha, p).T)
        Yj = FpMatrix(Y.a[:, piv], p)
        if not Yj.is_invertible():
            continue
        g = FpMatrix(Xa[:, piv], p) @ Yj.inverse()
        if g @ Y == X.X:
            pairs.append((alpha, g))
    return SubgroupRecord(closure([a for a, _ in pairs], r), dict(pairs), v, p)


def _ordering_key(R: SubgroupRecord) -> tuple:
    table = subgroup_classes(R.r)
    return (R.order, table.index_of(R.H), tuple(-d for d in R.fixed_profile))


def _normalize(R: SubgroupRecord) -> SubgroupRecord:
    """Conjugate R so that H' is the standard representative of its class."""
    rep = subgroup_classes(R.r).classes[subgroup_classes(R.r).index_of(R.H)].representative
    target = rep._set
    for alpha in symmetric_group(R.r):
        if all(h.conj(alpha) in target for h in R.H.elements):
            out = R.conjugate(FpMatrix.identity(R.v, R.p), alpha)
            return SubgroupRecord(rep, out.q, R.v, R.p, R.label)
    raise AssertionError("class representative not reached")


def _q_key(R: SubgroupRecord) -> tuple:
    return tuple(R.q[a].key() for a in R.H.elements)


class _ClassCollector:
    def __init__(self):
        self.buckets: dict[tuple, list[SubgroupRecord]] = {}

    def add(self, R: SubgroupRecord) -> bool:
        key = (R.order, _conj_key(R.H), R.fixed_profile)
        bucket = self.buckets.setdefault(key, [])
        if any(records_conjugate(R, S) for S in bucket):
            return False
        bucket.append(R)
        return True

    def records(self) -> list[SubgroupRecord]:
        return [R for b in self.buckets.values() for R in b]


def stabilizer_classes(v: int, r: int, p: int) -> list[SubgroupRecord]:
    """Classes of subgroups fixing at least one point of Omega, ordered so containment goes left to right.

    Every GL-orbit of Omega has exactly one reduced row echelon member, so the
    exact stabilizers are found by scanning those. Every subgroup of a
    stabilizer also fixes that point, so the list is then closed downward.
    Order is by |H|, then the class of H' in S_r, then how much q fixes.
    """
    reps = omega_rref_array(v, r, p)
    exact = _ClassCollector()
    for X in reps:
        exact.add(point_stabilizer(OmegaMatrix(FpMatrix(X, p))))
    found = _ClassCollector()
    for R in exact.records():
        for K in all_subgroups(R.H):
            found.add(R.restrict(K) if K.order < R.order else R)
    classes = [_normalize(R) for R in found.records()]
    classes.sort(key=lambda R: (_ordering_key(R), _q_key(R)))
    return classes


def exact_stabilizer_classes(v: int, r: int, p: int) -> list[SubgroupRecord]:
    """Classes of exact point stabilizers only."""
    exact = _ClassCollector()
    for X in omega_rref_array(v, r, p):
        exact.add(point_stabilizer(OmegaMatrix(FpMatrix(X, p))))
    return sorted((_normalize(R) for R in exact.records()), key=lambda R: (_ordering_key(R), _q_key(R)))


# Constructive cross-check -------------------------------------------------------------

def _matrix_powers_identity(mats: np.ndarray, m: int, p: int) -> np.ndarray:
    """Mask of matrices with M^m = I."""
    v = mats.shape[1]
    acc = np.broadcast_to(np.eye(v, dtype=np.int64), mats.shape).copy()
    for _ in range(m):
        acc = np.einsum("nab,nbc->nac", acc, mats) % p
    return (acc == np.eye(v, dtype=np.int64)).all(axis=(1, 2))


def _charpoly_key(M: np.ndarray, p: int) -> tuple:
    """Coefficients of the characteristic polynomial, as sums of principal minors."""
    v = M.shape[0]
    coeffs = []
    for k in range(1, v + 1):
        s = 0
        for idx in combinations(range(v), k):
            s += FpMatrix(M[np.ix_(idx, idx)], p).det()
        coeffs.append(s % p)
    return tuple(coeffs)


def candidate_records(v: int, r: int, p: int, gl_ceiling: int = 2**20) -> list[SubgroupRecord]:
    """Every (H', q) with p not dividing |H'|, up to conjugacy, built from generator images.

    q(first generator) runs over semisimple conjugacy classes (one matrix per
    characteristic polynomial), the other generators over all matrices of
    suitable order. Used to test the stabilizer criterion independently of the
    Omega scan.
    """
    if p ** (v * v) > gl_ceiling:
        raise CeilingExceeded(f"GL({v},{p}) candidate search", p ** (v * v), gl_ceiling)
    gl = np.concatenate(list(gl_array(v, p)))
    found = _ClassCollector()
    for cls in subgroup_classes(r).classes:
        Hp = cls.representative
        if Hp.order % p == 0:
            continue
        gens = list(Hp.generators)
        if not gens:
            found.add(trivial_record(v, r, p))
            continue
        pools = [gl[_matrix_powers_identity(gl, g.order(), p)] for g in gens]
        firsts = {}
        for M in pools[0]:
            firsts.setdefault(_charpoly_key(M, p), M)
        others = pools[1:]

        def rec(k, chosen):
            if k == len(gens):
                try:
                    R = record_from_generators(list(zip(gens, [FpMatrix(m, p) for m in chosen])), r, p)
                except ValueError:
                    return
                found.add(R)
                return
            for M in others[k - 1]:
                rec(k + 1, chosen + [M])

        for M in firsts.values():
            rec(1, [M])
    return found.records()
