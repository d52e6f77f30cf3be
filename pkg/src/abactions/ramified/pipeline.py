"""Orbit counting on Omega by Moebius inversion over the poset of point-stabilizer classes.

With classes H_1..H_s ordered so that containment (up to conjugacy) runs
left to right, L_i = |Omega^{H_i}| and the isotropic counts L°, the stratum
sizes E° and the per-stratum orbit counts O° satisfy

    L = U L°,  U = S^-1 D S,  E° = D^-1 S L,  O° = T D^-1 N^-1 L,

where d_ij counts the conjugates of H_i inside H_j, S holds class sizes,
N normalizer orders and T the orders |H_i|.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from ..errors import OutOfScope, PipelineInconsistency
from ..perms import _conj_key, all_subgroups
from .omega import group_order, omega_count
from .stabilizers import SubgroupRecord, fixed_set_size, normalizer_size, records_conjugate, stabilizer_classes

Matrix = list[list[Fraction]]


def d_matrix(classes: Sequence[SubgroupRecord]) -> list[list[int]]:
    """d_ij = number of subgroups of H_j conjugate to H_i."""
    s = len(classes)
    keys = [(_conj_key(R.H), R.fixed_profile) for R in classes]
    D = [[0] * s for _ in range(s)]
    for j, Rj in enumerate(classes):
        for K in all_subgroups(Rj.H):
            RK = Rj.restrict(K)
            key = (_conj_key(K), RK.fixed_profile)
            for i in range(s):
                if keys[i] == key and records_conjugate(classes[i], RK):
                    D[i][j] += 1
                    break
    return D


def _unit_upper_inverse(D: Sequence[Sequence[int]]) -> Matrix:
    s = len(D)
    for i in range(s):
        if D[i][i] != 1 or any(D[i][j] for j in range(i)):
            raise PipelineInconsistency("D is not unit upper triangular; the class order is not compatible")
    inv = [[Fraction(int(i == j)) for j in range(s)] for i in range(s)]
    for i in range(s - 1, -1, -1):
        for j in range(i + 1, s):
            inv[i] = [a - D[i][j] * b for a, b in zip(inv[i], inv[j])]
    return inv


def _matvec(M: Matrix, x: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in M]


@dataclass
class StrataReport:
    v: int
    r: int
    p: int
    classes: list[SubgroupRecord]
    D: list[list[int]]
    S: list[int]
    N: list[int]
    T: list[int]
    L: list[int]
    L_iso: list[int]
    E_iso: list[int]
    O_iso: list[int]

    @property
    def total(self) -> int:
        return sum(self.O_iso)

    @property
    def U(self) -> list[list[Fraction]]:
        s = len(self.S)
        return [[Fraction(self.D[i][j] * self.S[j], self.S[i]) for j in range(s)] for i in range(s)]

    def as_json(self) -> dict:
        return {
            "v": self.v, "r": self.r, "p": self.p,
            "classes": [R.as_json() for R in self.classes],
            "D": self.D, "S": self.S, "N": self.N, "T": self.T, "L": self.L,
            "L_iso": self.L_iso, "E_iso": self.E_iso, "O_iso": self.O_iso, "total": self.total,
        }


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1 or x < 0:
        raise PipelineInconsistency(f"{what} = {x} is not a nonnegative integer")
    return int(x)


def build_strata_report(classes: Sequence[SubgroupRecord] | None, v: int, r: int, p: int) -> StrataReport:
    """Run the inversion pipeline; every intermediate quantity must come out integral."""
    if p <= r:
        raise OutOfScope(f"p = {p} <= r = {r}: complete reducibility may fail, use the oracle")
    if classes is None:
        classes = stabilizer_classes(v, r, p)
    classes = list(classes)
    G = group_order(v, r, p)
    D = d_matrix(classes)
    Dinv = _unit_upper_inverse(D)
    N = [normalizer_size(R) for R in classes]
    S = [G // n for n in N]
    if any(G % n for n in N):
        raise PipelineInconsistency("a normalizer order does not divide |G|")
    T = [R.order for R in classes]
    L = [fixed_set_size(R) for R in classes]
    E = _matvec(Dinv, [Fraction(s * l) for s, l in zip(S, L)])
    L_iso = [_as_int(e / s, f"L°[{i}]") for i, (e, s) in enumerate(zip(E, S))]
    E_iso = [_as_int(e, f"E°[{i}]") for i, e in enumerate(E)]
    O_iso = [_as_int(Fraction(t) * e / G, f"O°[{i}]") for i, (t, e) in enumerate(zip(T, E))]
    rep = StrataReport(v, r, p, classes, D, S, N, T, L, L_iso, E_iso, O_iso)
    check_report(rep)
    return rep


def check_report(rep: StrataReport) -> None:
    """L = U L° and the strata partition Omega."""
    s = len(rep.S)
    U = rep.U
    for i in range(s):
        if sum(U[i][j] * rep.L_iso[j] for j in range(s)) != rep.L[i]:
            raise PipelineInconsistency(f"L != U L° in row {i}")
    if sum(S * l for S, l in zip(rep.S, rep.L_iso)) != omega_count(rep.v, rep.r, rep.p):
        raise PipelineInconsistency("strata sizes do not add up to |Omega|")


def pipeline_orbit_count(v: int, r: int, p: int) -> int:
    return build_strata_report(None, v, r, p).total
