"""Elementary abelian actions with signature (rho; p, ..., p): the hyperbolic/elliptic split,
the product-sum count over splittings, and a census by genus.

A generating vector over F_p^w splits as a hyperbolic block of rank u carried by
the A's and B's and an elliptic block of rank v = dim span(C) carried by the C's,
with u + v = w. Classes then count as sum_u h_u e_{w-u}.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .abelian import AbelianGroup, Signature, elementary_fpmatrix, genus_from_signature
from .errors import CeilingExceeded, InfeasibleSignature, OutOfScope
from .ff import FpMatrix, is_prime
from .genvec import GeneratingVector, Move, apply_word
from .ramified.omega import ENUM_CEILING, TABLE51_PAIRS, omega_count, orbit_count_oracle, table51
from .ramified.pipeline import build_strata_report
from .unramified import count_elementary


@dataclass(frozen=True)
class SplitForm:
    u: int
    v: int
    Y_AB: FpMatrix  # u x 2rho, columns (A_1..A_rho, B_1..B_rho)
    Y_C: FpMatrix  # v x r
    word: tuple[Move, ...] = field(default=(), compare=False)
    basis: FpMatrix | None = field(default=None, compare=False)  # columns: new basis of F_p^w

    def reassemble(self, G: AbelianGroup, sig: Signature) -> GeneratingVector:
        """The block-diagonal vector in the new basis."""
        rho, r, w = sig.rho, sig.branch_count, self.u + self.v
        p = G.factors[0]
        M = np.zeros((w, 2 * rho + r), dtype=np.int64)
        if self.u:
            M[:self.u, :2 * rho] = self.Y_AB.a
        if self.v:
            M[self.u:, 2 * rho:] = self.Y_C.a
        cols = [G.element(M[:, k] % p) for k in range(M.shape[1])]
        return GeneratingVector(G, sig, tuple(cols[:rho]), tuple(cols[rho:2 * rho]), tuple(cols[2 * rho:]))


def _coords(gv: GeneratingVector, elems) -> FpMatrix:
    return elementary_fpmatrix(gv.group, list(elems))


def _complement_basis(E: FpMatrix, w: int, p: int) -> list[tuple[int, ...]]:
    """Standard vectors extending the columns of E to a basis."""
    cur = [tuple(E.column(j)) for j in range(E.cols)]
    rank = FpMatrix(np.array(cur, dtype=np.int64).reshape(len(cur), w), p).rank() if cur else 0
    out = []
    for i in range(w):
        e = tuple(int(i == k) for k in range(w))
        trial = cur + [e]
        if FpMatrix(np.array(trial, dtype=np.int64), p).rank() > rank:
            cur, rank = trial, rank + 1
            out.append(e)
    return out


def split(gv: GeneratingVector) -> SplitForm:
    """Strip elliptic parts from the A's and B's with U/V moves, then change basis to block form."""
    G, sig = gv.group, gv.signature
    if not G.is_elementary():
        raise OutOfScope("the split is defined for elementary abelian groups")
    p, w, rho, r = G.factors[0], G.rank, sig.rho, sig.branch_count
    if any(m != p for m in sig.periods):
        raise OutOfScope(f"periods must all equal {p}")
    if r == 1:
        raise InfeasibleSignature("a single branch point is infeasible")
    C = _coords(gv, gv.C) if r else FpMatrix.zeros(w, 0, p)
    # Independent subset of the C's spanning E.
    piv: list[int] = []
    for j in range(r):
        trial = piv + [j]
        if FpMatrix(C.a[:, trial], p).rank() == len(trial):
            piv = trial
    v = len(piv)
    Ebasis = FpMatrix(C.a[:, piv], p) if v else FpMatrix.zeros(w, 0, p)
    W = _complement_basis(Ebasis, w, p)
    u = w - v
    N = FpMatrix(np.concatenate([np.array(W, dtype=np.int64).reshape(len(W), w).T, Ebasis.a], axis=1), p)
    Ninv = N.inverse()
    word: list[Move] = []
    for kind, elems in (("V", gv.A), ("U", gv.B)):
        for i, x in enumerate(elems):
            y = Ninv.a @ np.array(x.coords, dtype=np.int64) % p
            for t, j in enumerate(piv):
                k = int(-y[u + t]) % p
                if k:
                    word.append(Move(kind, i + 1, j + 1, k))
    reduced = apply_word(gv, word)
    full = Ninv @ _coords(reduced, reduced.A + reduced.B + reduced.C)
    if np.any(full.a[u:, :2 * rho]) or np.any(full.a[:u, 2 * rho:]):
        raise AssertionError("split did not reach block form")
    Y_AB = FpMatrix(full.a[:u, :2 * rho], p)
    Y_C = FpMatrix(full.a[u:, 2 * rho:], p)
    if Y_AB.rank() != u or Y_C.rank() != v:
        raise ValueError("input does not generate the group")
    if u > 2 * rho or (r and not 1 <= v < r):
        raise AssertionError("block ranks out of range")
    return SplitForm(u, v, Y_AB, Y_C, tuple(word), N)


# Counting ---------------------------------------------------------------------

@dataclass(frozen=True)
class Summand:
    u: int
    v: int
    h: int
    e: int
    h_source: str
    e_source: str

    @property
    def value(self) -> int:
        return self.h * self.e


def elliptic_count(v: int, r: int, p: int, oracle_ceiling: int = ENUM_CEILING) -> tuple[int, str]:
    """(e_v, provenance): classes of totally ramified F_p^v actions with r branch points."""
    if r == 0:
        return (1, "empty") if v == 0 else (0, "empty")
    if not 1 <= v < r:
        return 0, "rank-bound"
    if v == r - 1:
        return 1, "unique-orbit"
    if (r, v) in TABLE51_PAIRS:
        try:
            return table51(r, v, p), "closed-form"
        except OutOfScope:
            pass
    if omega_count(v, r, p) == 0:
        return 0, "empty"
    try:
        return orbit_count_oracle(v, r, p, oracle_ceiling), "oracle"
    except CeilingExceeded:
        if p > r:
            return build_strata_report(None, v, r, p).total, "pipeline"
        raise


@dataclass
class CountReport:
    prime: int
    rank: int
    signature: Signature
    genus: int | None
    summands: list[Summand]
    note: str = ""

    @property
    def count(self) -> int:
        return sum(s.value for s in self.summands)

    def as_json(self) -> dict:
        return {
            "signature": str(self.signature),
            "genus": self.genus,
            "h-vector": [s.h for s in self.summands],
            "e-vector": [s.e for s in self.summands],
            "count": self.count,
            "provenance": [{"u": s.u, "v": s.v, "h": s.h_source, "e": s.e_source} for s in self.summands],
            "note": self.note,
        }


def count_actions(p: int, w: int, sig: Signature, oracle_ceiling: int = ENUM_CEILING) -> CountReport:
    """sum_{u=0..w} h_u e_{w-u}; zero with a note when the signature is infeasible."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if w < 1:
        raise ValueError("rank must be >= 1")
    if any(m != p for m in sig.periods):
        raise OutOfScope(f"periods must all equal {p} for F_{p}^{w}")
    genus = genus_from_signature(p**w, sig)
    r = sig.branch_count
    if not isinstance(genus, int):
        return CountReport(p, w, sig, None, [], note=f"non-integral genus {genus}")
    if r == 1:
        return CountReport(p, w, sig, genus, [], note="a single branch point is infeasible")
    summands = []
    for u in range(w + 1):
        h = count_elementary(sig.rho, u)
        e, src = elliptic_count(w - u, r, p, oracle_ceiling) if h else (0, "skipped")
        summands.append(Summand(u, w - u, h, e, "count_elementary", src))
    return CountReport(p, w, sig, genus, summands)


# Census -------------------------------------------------------------------------

# Published (group, signature, genus) pairings that disagree with Riemann-Hurwitz.
GENUS_LABEL_CONFLICTS = [((5, 2), Signature(1, (5, 5, 5)), 26)]


def rh_signatures(p: int, w: int, genus: int) -> list[Signature]:
    """Every (rho; p^r) with 2 genus - 2 = p^w (2 rho - 2) + r p^(w-1) (p - 1), r != 1."""
    n = p**w
    lhs = 2 * genus - 2
    out = []
    rho = 0
    while n * (2 * rho - 2) <= lhs:
        rest = lhs - n * (2 * rho - 2)
        step = p ** (w - 1) * (p - 1)
        if rest % step == 0 and rest // step != 1:
            out.append(Signature(rho, (p,) * (rest // step)))
        rho += 1
    return out


@dataclass
class CensusReport:
    prime: int
    rank: int
    genus: int
    entries: list[CountReport]
    notes: list[str]

    @property
    def total(self) -> int:
        return sum(e.count for e in self.entries)

    def as_json(self) -> dict:
        return {"prime": self.prime, "rank": self.rank, "genus": self.genus,
                "entries": [e.as_json() for e in self.entries], "total": self.total, "notes": self.notes}


def genus_census(p: int, w: int, genus: int, oracle_ceiling: int = ENUM_CEILING, workers: int = 1) -> CensusReport:
    """Counts for every Riemann-Hurwitz feasible signature of F_p^w on the given genus."""
    if genus < 2:
        raise ValueError("genus must be >= 2")
    sigs = rh_signatures(p, w, genus)
    if workers > 1 and len(sigs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            entries = list(ex.map(count_actions, [p] * len(sigs), [w] * len(sigs), sigs,
                                  [oracle_ceiling] * len(sigs)))
    else:
        entries = [count_actions(p, w, s, oracle_ceiling) for s in sigs]
    notes = []
    for (pp, ww), sig, g in GENUS_LABEL_CONFLICTS:
        if (pp, ww) == (p, w) and g == genus:
            actual = genus_from_signature(p**w, sig)
            if actual != genus:
                notes.append(f"{sig} is listed at genus {g} in the literature; Riemann-Hurwitz gives {actual}")
    return CensusReport(p, w, genus, entries, notes)
