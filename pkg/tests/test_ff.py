from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abactions.ff import (FpMatrix, batch_rank, count_invertible_in_span, enumerate_gl, find_invertible_in_span,
                          gl_generators, gl_order, is_prime, kernel_basis, primitive_root, solve, span_elements,
                          subspace_count)

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_dim=4):
    p = draw(st.sampled_from(PRIMES))
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=m, max_size=m))
    return FpMatrix(rows, p)


def test_is_prime_and_primitive_root():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    for p in [3, 5, 7, 11, 13]:
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


@given(matrices())
def test_rank_nullity(M):
    assert M.rank() + len(kernel_basis(M)) == M.cols
    for k in kernel_basis(M):
        assert not np.any(M.a @ np.array(k) % M.p)


@given(matrices())
def test_rref_is_row_equivalent(M):
    R, piv = M.rref()
    assert R.rank() == M.rank() == len(piv)
    for i, j in enumerate(piv):
        assert R.a[i, j] == 1 and not np.any(np.delete(R.a[:, j], i))


@given(matrices(), st.data())
def test_solve(M, data):
    x = data.draw(st.lists(st.integers(0, M.p - 1), min_size=M.cols, max_size=M.cols))
    b = tuple(M.a @ np.array(x) % M.p)
    y = solve(M, b)
    assert y is not None and tuple(M.a @ np.array(y) % M.p) == b


@given(matrices())
def test_inverse_when_square(M):
    if M.rows != M.cols:
        return
    if M.is_invertible():
        assert M @ M.inverse() == FpMatrix.identity(M.rows, M.p)
        assert M.det() != 0
    else:
        assert M.det() == 0
        with pytest.raises(ZeroDivisionError):
            M.inverse()


@given(st.lists(matrices(max_dim=3), min_size=1, max_size=8))
def test_batch_rank_matches_single(ms):
    p = ms[0].p
    shape = ms[0].shape
    ms = [m for m in ms if m.p == p and m.shape == shape]
    arr = np.stack([m.a for m in ms])
    assert list(batch_rank(arr, p)) == [m.rank() for m in ms]


@pytest.mark.parametrize("v,p", [(1, 5), (2, 2), (2, 3), (3, 2)])
def test_gl_enumeration_and_generators(v, p):
    gl = list(enumerate_gl(v, p))
    assert len(gl) == gl_order(v, p)
    # generators reach all of GL
    seen = {FpMatrix.identity(v, p)}
    frontier = list(seen)
    gens = [FpMatrix(g, p) for g in gl_generators(v, p)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    assert len(seen) == gl_order(v, p)


@pytest.mark.parametrize("v,p", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_subspace_count_by_enumeration(v, p):
    vecs = [np.array(x) for x in product(range(p), repeat=v)]
    for l in range(v + 1):
        spans = set()
        for basis in product(vecs, repeat=l):
            B = FpMatrix(np.array(basis).reshape(l, v), p) if l else None
            if l and B.rank() == l:
                spans.add(frozenset(map(tuple, span_elements([tuple(b) for b in basis], p))))
        expected = 1 if l == 0 else len(spans)
        assert subspace_count(v, l, p) == expected


def test_invertible_in_span():
    p = 5
    full = [np.eye(2, dtype=np.int64)[:, [i]] @ np.eye(2, dtype=np.int64)[[j], :] for i in range(2) for j in range(2)]
    assert count_invertible_in_span(full, 2, p) == gl_order(2, p)
    nil = [np.array([[0, 1], [0, 0]])]
    assert find_invertible_in_span(nil, 2, p) is None
    diag = [np.array([[1, 0], [0, 0]]), np.array([[0, 0], [0, 1]])]
    g = find_invertible_in_span(diag, 2, p)
    assert g is not None and FpMatrix(g, p).is_invertible()
    assert count_invertible_in_span(diag, 2, p) == (p - 1) ** 2
