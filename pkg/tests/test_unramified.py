import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abactions.abelian import AbelianGroup, Signature
from abactions.errors import OutOfScope
from abactions.genvec import apply_word, cup_invariant, orbit_classes_oracle, unit_moves, validate
from abactions.unramified import (canonical_reps_elementary, classify_unramified, count_elementary,
                                  count_rank2_squarefree, cup_classes, divisor_count, genus65_catalogue,
                                  is_normal_form, is_squarefree, normal_form_family, reduce_abelian_certified)


def test_count_elementary_values():
    # one class per K with w/2 <= K <= min(rho, w)
    assert [count_elementary(2, w) for w in range(6)] == [1, 1, 2, 1, 1, 0]
    assert [count_elementary(3, w) for w in range(8)] == [1, 1, 2, 2, 2, 1, 1, 0]
    assert count_elementary(1, 1) == count_elementary(1, 2) == 1
    with pytest.raises(ValueError):
        count_elementary(-1, 0)


@given(st.integers(0, 8), st.integers(0, 16))
def test_count_elementary_matches_canonical_list(rho, w):
    if w == 0:
        return
    reps = canonical_reps_elementary(3, w, rho)
    assert len(reps) == count_elementary(rho, w)
    assert len({r.K for r in reps}) == len(reps)


@pytest.mark.parametrize("p,w,rho", [(2, 1, 1), (2, 2, 1), (2, 2, 2), (2, 3, 2), (3, 2, 2), (3, 3, 2), (5, 2, 2)])
def test_canonical_reps_are_valid_and_distinct(p, w, rho):
    reps = canonical_reps_elementary(p, w, rho)
    part = orbit_classes_oracle(AbelianGroup.elementary(p, w), Signature(rho))
    assert part.count == len(reps)
    assert len({part.orbit_of(r.vector) for r in reps}) == len(reps)
    for r in reps:
        assert validate(r.vector).ok


def test_squarefree_helpers():
    assert [divisor_count(n) for n in (1, 6, 12, 30)] == [1, 4, 6, 8]
    assert is_squarefree(30) and not is_squarefree(12)
    with pytest.raises(OutOfScope):
        count_rank2_squarefree(4)


@pytest.mark.parametrize("factors", [(2, 2), (6, 2), (6, 3), (10, 2), (3, 3)])
def test_rank2_squarefree_law_small(factors):
    G = AbelianGroup(factors)
    assert orbit_classes_oracle(G, Signature(2)).count == count_rank2_squarefree(factors[1])


@pytest.mark.parametrize("factors,rho,n", [((5, 5), 2, 2), ((4, 4), 2, 3), ((8, 4), 2, 3), ((12, 4), 2, 3),
                                          ((6, 6), 2, 4), ((4, 4, 2), 2, 6), ((3, 3), 1, 1), ((4, 2), 1, 1)])
def test_normal_form_family_sizes(factors, rho, n):
    fam = normal_form_family(AbelianGroup(factors), rho)
    assert len(fam) == n
    assert all(is_normal_form(v) and validate(v).ok for v in fam)


@pytest.mark.parametrize("factors,rho", [((4, 2), 2), ((3, 3), 2), ((4, 4), 2), ((6, 6), 2), ((2, 2, 2), 2)])
def test_reducer_certificates_replay(factors, rho):
    G, sig = AbelianGroup(factors), Signature(rho)
    fam = normal_form_family(G, rho)
    part = orbit_classes_oracle(G, sig) if G.order ** (2 * rho) <= 2**21 else None
    rng = random.Random(7)
    moves = unit_moves(sig)
    for start in fam:
        for _ in range(3):
            gv = apply_word(start, [rng.choice(moves) for _ in range(25)])
            red = reduce_abelian_certified(gv)
            assert red.replay(gv) == red.result
            assert red.result in fam
            assert cup_invariant(red.result).value == cup_invariant(gv).value.transform(red.theta)
            if part is not None:
                assert part.orbit_of(red.result) == part.orbit_of(gv)


def test_cup_classes_bound_below():
    fam = normal_form_family(AbelianGroup((4, 4, 2)), 2)
    assert len(cup_classes(fam)) == 2
    assert len(cup_classes(normal_form_family(AbelianGroup((8, 4)), 2))) == 3


def test_classify_unramified_report():
    rep = classify_unramified(AbelianGroup((4, 4)), 2)
    assert (rep.genus, rep.upper_bound, rep.cup_lower_bound, rep.oracle_count, rep.exact) == (17, 3, 3, 3, 3)
    js = rep.as_json()
    assert js["classes"] == 3 and len(js["representatives"]) == 3
    rep2 = classify_unramified(AbelianGroup((12, 4)), 2, use_oracle=False)
    assert rep2.oracle_count is None and rep2.exact == 3


def test_catalogue_representatives_valid():
    for entry in genus65_catalogue():
        for v in entry["representatives"]:
            assert validate(v).ok


def printed_branch(rho, r):
    """The class count for r = rho + i as printed, without the K = ceil(r/2)..rho derivation."""
    i = r - rho
    return (rho - i) // 2 if (rho - i) % 2 == 0 else (rho - i + 1) // 2


def test_count_past_rho_against_oracle():
    # rho = 3, r = 4: K in {2, 3}, so two classes; the printed even branch gives one
    n = orbit_classes_oracle(AbelianGroup.elementary(2, 4), Signature(3)).count
    assert n == count_elementary(3, 4) == 2
    assert printed_branch(3, 4) == 1
    assert all(printed_branch(rho, r) == count_elementary(rho, r)
               for rho in range(2, 9) for r in range(rho + 1, 2 * rho) if (2 * rho - r) % 2)
