from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abactions.errors import CeilingExceeded, OutOfScope
from abactions.ff import FpMatrix, enumerate_gl, gl_order
from abactions.perms import Perm
from abactions.ramified.omega import (OMEGA_CLOSED_FORMS, ActionElement, OmegaMatrix, act, beta_n, decode_matrices,
                                      encode_matrices, enumerate_omega, group_order, omega_array, omega_bar_count,
                                      omega_count, omega_rref_array, orbit_count_oracle, orbit_partition_oracle,
                                      scaled_sum_count, table51, unique_when_r_is_v_plus_1)


@pytest.mark.parametrize("p", [2, 3])
def test_closed_forms_match_recursion_and_enumeration(p):
    for (v, r), f in OMEGA_CLOSED_FORMS.items():
        assert omega_count(v, r, p) == f(p) == len(omega_array(v, r, p))


@pytest.mark.parametrize("v,r,p", [(1, 3, 3), (2, 3, 2), (2, 3, 3), (1, 4, 5)])
def test_omega_bar_by_brute_force(v, r, p):
    vecs = [x for x in product(range(p), repeat=v) if any(x)]
    n = sum(1 for t in product(vecs, repeat=r) if not np.any(np.sum(t, axis=0) % p))
    assert omega_bar_count(v, r, p) == n


def test_scaled_sums_reduce_to_omega():
    p, coeffs = 5, (1, 2, 3)
    n = 0
    for t in product(range(1, p), repeat=3):
        if sum(a * x for a, x in zip(coeffs, t)) % p == 0:
            n += 1
    assert scaled_sum_count(coeffs, 1, p) == n == omega_count(1, 3, p)
    with pytest.raises(ValueError):
        scaled_sum_count((1, 5), 1, 5)


@pytest.mark.parametrize("v,r,p", [(1, 3, 5), (2, 3, 3), (2, 4, 3), (2, 4, 5), (3, 4, 2)])
def test_gl_acts_freely(v, r, p):
    assert len(omega_rref_array(v, r, p)) * gl_order(v, p) == omega_count(v, r, p)


@st.composite
def omega_points(draw):
    v, r, p = draw(st.sampled_from([(1, 3, 5), (2, 3, 3), (2, 4, 5), (3, 4, 3)]))
    X = omega_array(v, r, p)
    k = draw(st.integers(0, len(X) - 1))
    gl = list(enumerate_gl(v, p)) if gl_order(v, p) < 20000 else None
    elems = []
    for _ in range(2):
        g = draw(st.sampled_from(gl))
        alpha = Perm(tuple(draw(st.permutations(range(r)))))
        elems.append(ActionElement(g, alpha))
    return OmegaMatrix(FpMatrix(X[k], p)), elems


@given(omega_points())
def test_action_laws(data):
    X, (a, b) = data
    e = ActionElement.identity(X.v, X.r, X.p)
    assert act(e, X) == X
    assert act(a * b, X) == act(a, act(b, X))
    assert act(a.inverse(), act(a, X)) == X


@given(omega_points())
def test_column_convention(data):
    X, (a, _) = data
    Y = act(a, X)
    for i in range(X.r):
        assert Y.X.column(i) == (a.g @ FpMatrix(X.X.a[:, [a.alpha(i)]], X.p)).column(0)


def test_omega_matrix_validation():
    with pytest.raises(ValueError):
        OmegaMatrix.from_rows([[1, 0, 4]], 5)
    with pytest.raises(ValueError):
        OmegaMatrix.from_rows([[1, 2, 3]], 5)
    with pytest.raises(ValueError):
        OmegaMatrix.from_rows([[1, 4, 0], [1, 4, 0]], 5)
    assert OmegaMatrix.from_rows([[1, 2, 2]], 5).tolist() == [[1, 2, 2]]


def test_codes_roundtrip():
    X = omega_array(2, 4, 3)
    assert np.array_equal(decode_matrices(encode_matrices(X, 3), 2, 4, 3), X)
    assert len(list(enumerate_omega(1, 3, 3))) == 2


@pytest.mark.parametrize("v,p", [(1, 5), (2, 3), (2, 5), (3, 5)])
def test_one_orbit_when_r_is_v_plus_one(v, p):
    assert orbit_count_oracle(v, v + 1, p) == 1
    X = unique_when_r_is_v_plus_1(v, p)
    codes, labels = orbit_partition_oracle(v, v + 1, p)
    assert (X.v, X.r) == (v, v + 1)
    assert len(set(labels.tolist())) == 1


def test_beta_n():
    assert [beta_n(3, p) for p in (5, 7, 11, 13)] == [0, 2, 0, 2]
    assert [beta_n(4, p) for p in (5, 7, 11, 13)] == [2, 0, 0, 2]
    assert beta_n(2, 7) == 1


@pytest.mark.parametrize("r,v,p", [(3, 1, 2), (3, 1, 3), (3, 1, 5), (3, 1, 7), (3, 2, 5), (4, 1, 3), (4, 1, 5),
                                   (4, 1, 7), (4, 2, 3), (4, 2, 5), (4, 3, 3)])
def test_table51_against_oracle(r, v, p):
    assert table51(r, v, p) == orbit_count_oracle(v, r, p)


def test_table51_refusals():
    with pytest.raises(OutOfScope):
        table51(5, 2, 7)
    with pytest.raises(OutOfScope):
        table51(4, 2, 2)
    with pytest.raises(ValueError):
        table51(3, 1, 9)
    with pytest.raises(CeilingExceeded):
        omega_array(2, 5, 7, ceiling=1000)


def test_group_order():
    assert group_order(2, 4, 13) == gl_order(2, 13) * 24
