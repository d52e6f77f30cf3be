"""Published data for rank-2 actions with four branch points, and the (H', q) records behind it.

Case labels follow the published tables ("1".."11", "11a", "12"); the
records are built here from explicit generator images and checked against
the published formulas in the tests.
"""
from __future__ import annotations

from collections.abc import Callable

from ..errors import OutOfScope
from ..ff import FpMatrix, primitive_root
from ..perms import Perm
from .omega import beta_n
from .stabilizers import SubgroupRecord, record_from_generators, trivial_record

Poly = Callable[[int], int]


def _c(*cycles) -> Perm:
    return Perm.from_cycles(4, cycles)


def _root_of_unity(n: int, p: int) -> int:
    if (p - 1) % n:
        raise OutOfScope(f"F_{p} has no primitive {n}-th root of unity")
    return pow(primitive_root(p), (p - 1) // n, p)


def case_record(label: str, p: int) -> SubgroupRecord:
    """The record of the given case at prime p, with a 2-dimensional q."""
    d = lambda a, b: [[a % p, 0], [0, b % p]]
    rot = [[0, p - 1], [1, 0]]
    one = d(1, 1)
    builders = {
        "1": lambda: None,
        "2": lambda: [(_c((1, 2)), one)],
        "3": lambda: [(_c((1, 2)), d(1, -1))],
        "4": lambda: [(_c((1, 2), (3, 4)), d(1, -1))],
        "5": lambda: [(_c((1, 2), (3, 4)), d(-1, -1))],
        "6": lambda: [(_c((1, 2, 3)), d(1, _root_of_unity(3, p)))],
        "7": lambda: [(_c((1, 2)), d(1, -1)), (_c((3, 4)), one)],
        "8": lambda: [(_c((1, 2)), d(-1, 1)), (_c((3, 4)), d(1, -1))],
        "9": lambda: [(_c((1, 2), (3, 4)), d(-1, 1)), (_c((1, 3), (2, 4)), d(1, -1))],
        "10": lambda: [(_c((1, 2, 3, 4)), d(_root_of_unity(4, p), -1))],
        "11": lambda: [(_c((1, 2, 3, 4)), rot)],
        "11a": lambda: [(_c((1, 2, 3, 4)), d(_root_of_unity(4, p), -_root_of_unity(4, p)))],
        "12": lambda: [(_c((1, 2, 3, 4)), rot), (_c((1, 3)), d(-1, 1))],
    }
    if label not in builders:
        raise KeyError(label)
    gens = builders[label]()
    if gens is None:
        return trivial_record(2, 4, p, label)
    return record_from_generators([(a, FpMatrix(m, p)) for a, m in gens], 4, p, label)


CASE_LABELS = ("1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "11a", "12")


def case_applies(label: str, p: int) -> bool:
    """Whether the case belongs to the family of p (p > 3)."""
    if label == "6":
        return beta_n(3, p) == 2
    if label in ("10", "11a"):
        return beta_n(4, p) == 2
    if label == "11":
        return beta_n(4, p) == 0
    return True


# Fixed-point data as printed: (|H'|, |N_G(H)|, |Omega^H|) -------------------------------

TABLE43_PUBLISHED: dict[str, tuple[int, Poly, Poly]] = {
    "1": (1, lambda p: 24 * p * (p - 1) * (p * p - 1), lambda p: p * (p - 1) * (p * p - 1) * (p * p + p - 3)),
    "2": (2, lambda p: 4 * p * (p - 1) * (p * p - 1), lambda p: p * (p - 1) * (p * p - 1)),
    "3": (2, lambda p: 4 * (p - 1) ** 2, lambda p: (p - 1) * (p * p - 1)),
    "4": (2, lambda p: 8 * (p - 1) ** 2, lambda p: (p - 1) * (p * p - 1)),
    "5": (2, lambda p: 8 * p * (p - 1) * (p * p - 1), lambda p: p * (p - 1) * (p * p - 1)),
    "6": (3, lambda p: 3 * (p - 1) ** 2, lambda p: (p - 1) ** 2),
    "7": (4, lambda p: 4 * (p - 1) ** 2, lambda p: (p - 1) ** 2),
    "8": (4, lambda p: 8 * (p - 1) ** 2, lambda p: (p - 1) ** 2),
    "9": (4, lambda p: 8 * (p - 1) ** 2, lambda p: (p - 1) ** 2),
    "10": (4, lambda p: 4 * (p - 1) ** 2, lambda p: (p - 1) ** 2),
    "11": (4, lambda p: 8 * (p - 1) ** 2, lambda p: p * p - 1),
    "11a": (4, lambda p: 8 * (p * p - 1), lambda p: (p - 1) ** 2),
    "12": (10, lambda p: 8 * (p - 1), lambda p: p - 1),
}

# Values confirmed by enumeration and by the integrality of the published orbit vector.
TABLE43_CORRECTED: dict[str, tuple[int, Poly, Poly]] = dict(TABLE43_PUBLISHED)
TABLE43_CORRECTED["3"] = (2, TABLE43_PUBLISHED["3"][1], lambda p: (p - 1) ** 3)
TABLE43_CORRECTED["11"] = (4, lambda p: 8 * (p * p - 1), lambda p: p * p - 1)
TABLE43_CORRECTED["11a"] = (4, lambda p: 8 * (p - 1) ** 2, lambda p: (p - 1) ** 2)
TABLE43_CORRECTED["12"] = (8, TABLE43_PUBLISHED["12"][1], TABLE43_PUBLISHED["12"][2])

# Class order and containment counts for p = 1 mod 12.
TABLE44_ORDER = ("1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11a", "12")
TABLE44_D = (
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0, 1, 2, 0, 0, 0, 2),
    (0, 0, 0, 1, 0, 0, 1, 0, 2, 1, 0, 2),
    (0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 1),
    (0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1),
    (0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
)


def published_orbit_vector(p: int) -> tuple[int, ...]:
    """The per-stratum orbit counts printed for p = 1 mod 12."""
    if p % 12 != 1:
        raise OutOfScope("the orbit vector is printed for p = 1 mod 12 only")
    return ((p * p - 8 * p + 7) // 24, 0, (p - 3) // 2, (p - 5) // 4, 0, 1, 1, 0, 0, 1, 0, 1)


# Family totals for four branch points, rank 2: p mod 12 -> (excluded cases, coefficient of p, constant).
# The summary table in the derivation prints 6p; the final table prints 10p.
FAMILY_TOTALS_DERIVATION = {11: (("6", "10"), 6, 9), 7: (("10",), 6, 25), 5: (("6",), 6, 31), 1: ((), 6, 37)}
FAMILY_TOTALS_FINAL = {11: 9, 7: 25, 5: 21, 1: 37}


def family_total(p: int, coeff: int, const: int) -> tuple[int, int]:
    """(numerator, 24) of (p^2 + coeff p + const) / 24."""
    return p * p + coeff * p + const, 24
