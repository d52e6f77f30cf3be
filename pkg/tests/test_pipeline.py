from fractions import Fraction

import pytest

from abactions.errors import OutOfScope, PipelineInconsistency
from abactions.ramified.omega import omega_count, orbit_count_oracle, table51
from abactions.ramified.pipeline import build_strata_report, d_matrix, pipeline_orbit_count
from abactions.ramified.sigma4 import (FAMILY_TOTALS_DERIVATION, FAMILY_TOTALS_FINAL, TABLE44_D, TABLE44_ORDER,
                                       case_record, published_orbit_vector)
from abactions.ramified.stabilizers import records_conjugate, stabilizer_classes


@pytest.fixture(scope="module")
def rep13():
    return build_strata_report(None, 2, 4, 13)


def test_class_inventory_and_d(rep13):
    assert len(rep13.classes) == 12
    for R, label in zip(rep13.classes, TABLE44_ORDER):
        assert records_conjugate(R, case_record(label, 13))
    assert [tuple(row) for row in rep13.D] == list(TABLE44_D)


def test_orbit_vector(rep13):
    assert rep13.O_iso == list(published_orbit_vector(13)) == [3, 0, 5, 2, 0, 1, 1, 0, 0, 1, 0, 1]
    assert rep13.total == 14 == table51(4, 2, 13)


def test_matrix_identities(rep13):
    s = len(rep13.S)
    U = rep13.U
    for i in range(s):
        for j in range(s):
            assert U[i][j] * rep13.S[i] == rep13.D[i][j] * rep13.S[j]
        assert sum(U[i][j] * rep13.L_iso[j] for j in range(s)) == rep13.L[i]
    assert sum(a * b for a, b in zip(rep13.S, rep13.L_iso)) == omega_count(2, 4, 13)
    assert all(e == s_ * l for e, s_, l in zip(rep13.E_iso, rep13.S, rep13.L_iso))
    assert rep13.as_json()["total"] == 14


@pytest.mark.parametrize("v,r,p", [(1, 3, 5), (1, 3, 7), (1, 4, 5), (1, 4, 7), (2, 3, 5), (2, 4, 5), (2, 4, 7),
                                   (3, 4, 5), (1, 5, 7)])
def test_pipeline_matches_oracle(v, r, p):
    rep = build_strata_report(None, v, r, p)
    assert rep.total == orbit_count_oracle(v, r, p)
    assert all(isinstance(x, int) and x >= 0 for x in rep.O_iso)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_pipeline_matches_closed_form(p):
    assert pipeline_orbit_count(2, 4, p) == table51(4, 2, p)


@pytest.mark.parametrize("p", [13, 17, 19, 23, 29, 37])
def test_family_tables(p):
    final = FAMILY_TOTALS_FINAL[p % 12]
    assert Fraction(p * p + 10 * p + final, 24) == table51(4, 2, p)
    _, coeff, const = FAMILY_TOTALS_DERIVATION[p % 12]
    assert Fraction(p * p + coeff * p + const, 24) != table51(4, 2, p)


def test_d_matrix_unit_upper_triangular():
    classes = stabilizer_classes(2, 4, 5)
    D = d_matrix(classes)
    for i in range(len(D)):
        assert D[i][i] == 1 and not any(D[i][:i])
        assert D[0][i] == 1  # the trivial group sits in every class once


def test_refusals():
    with pytest.raises(OutOfScope):
        build_strata_report(None, 2, 4, 3)
    classes = stabilizer_classes(1, 4, 5)
    with pytest.raises(PipelineInconsistency):
        build_strata_report(list(reversed(classes)), 1, 4, 5)
