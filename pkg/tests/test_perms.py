from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abactions.perms import (Perm, all_subgroups, are_conjugate, closure, normalizer_in_sym, perm_matrix,
                             subgroup_classes, symmetric_group)

perms4 = st.permutations(range(4)).map(lambda x: Perm(tuple(x)))


def test_product_composes_left_to_right():
    a = Perm.from_cycles(3, [(1, 2)])
    b = Perm.from_cycles(3, [(2, 3)])
    for i in range(3):
        assert (a * b)(i) == b(a(i))


@given(perms4, perms4)
def test_perm_matrix_is_a_homomorphism(a, b):
    assert perm_matrix(a * b, 7) == perm_matrix(a, 7) @ perm_matrix(b, 7)


@given(perms4)
def test_inverse_and_order(a):
    assert (a * a.inverse()).is_identity()
    x = Perm.identity(4)
    for _ in range(a.order()):
        x = x * a
    assert x.is_identity()


def test_cycles_roundtrip():
    for img in permutations(range(5)):
        a = Perm(img)
        assert Perm.from_cycles(5, a.cycles()) == a


@pytest.mark.parametrize("r,n_subgroups,n_classes", [(3, 6, 4), (4, 30, 11), (5, 156, 19)])
def test_subgroup_lattice_sizes(r, n_subgroups, n_classes):
    sym = closure(list(symmetric_group(r)), r)
    assert sym.order == len(symmetric_group(r))
    assert len(all_subgroups(sym)) == n_subgroups
    table = subgroup_classes(r) if r <= 5 else None
    assert len(table.classes) == n_classes
    assert sum(c.class_size for c in table.classes) == n_subgroups


def test_class_lookup_and_conjugacy():
    table = subgroup_classes(4)
    H = closure([Perm.from_cycles(4, [(1, 2)])], 4)
    K = closure([Perm.from_cycles(4, [(3, 4)])], 4)
    L = closure([Perm.from_cycles(4, [(1, 2), (3, 4)])], 4)
    assert are_conjugate(H, K) and not are_conjugate(H, L)
    assert table.index_of(H) == table.index_of(K) != table.index_of(L)


def test_normalizers_in_s4():
    k4 = closure([Perm.from_cycles(4, [(1, 2), (3, 4)]), Perm.from_cycles(4, [(1, 3), (2, 4)])], 4)
    assert normalizer_in_sym(k4).order == 24
    c4 = closure([Perm.from_cycles(4, [(1, 2, 3, 4)])], 4)
    assert normalizer_in_sym(c4).order == 8
    t = closure([Perm.from_cycles(4, [(1, 2)])], 4)
    assert normalizer_in_sym(t).order == 4
