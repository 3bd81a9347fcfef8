from itertools import product
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from biqlab.lattice import (
    AbelianGroup,
    CokernelMap,
    cokernel,
    det,
    diagonal_cofactors,
    identity,
    inverse_unimodular,
    matmul,
    minors_gcd,
    smith_normal_form,
)

I3 = identity(3)
A1 = [[1, 2, 2], [1, 1, 2], [1, 1, 1]]


def matrices(max_rows=4, max_cols=4, lo=-3, hi=3):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def unimodular(n):
    """Random products of elementary matrices."""
    step = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-2, 2),
                     st.booleans())

    def build(steps):
        m = identity(n)
        for i, j, q, neg in steps:
            e = identity(n)
            if i != j:
                e[i][j] = q
            elif neg:
                e[i][i] = -1
            m = matmul(e, m)
        return m

    return st.lists(step, max_size=8).map(build)


class TestExamples:
    def test_det(self):
        assert det(I3) == 1
        assert det([[1, 2], [1, 1]]) == -1
        assert det(A1) == 1

    def test_det_rejects_non_square(self):
        with pytest.raises(ValueError):
            det([[1, 2, 3], [4, 5, 6]])

    def test_diagonal_cofactors(self):
        assert diagonal_cofactors(I3) == (1, 1, 1)
        assert diagonal_cofactors(A1) == (-1, -1, -1)
        assert diagonal_cofactors([[1, 1, 0], [1, 1, 0], [0, 0, 1]]) == (1, 1, 0)
        with pytest.raises(ValueError):
            diagonal_cofactors([[1, 0], [0, 1]])

    def test_snf(self):
        assert smith_normal_form([[2, 0], [0, 3]])[0] == [1, 6]
        assert smith_normal_form([[0, 0], [0, 0]])[0] == []
        assert smith_normal_form([[2, 4], [0, 8]])[0] == [2, 8]

    def test_minors_gcd(self):
        assert minors_gcd(I3, 3) == 1
        assert minors_gcd([[2, 0], [0, 2]], 2) == 4
        assert minors_gcd([[1, 0], [0, 1], [1, 1]], 2) == 1
        assert minors_gcd([[0, 0], [0, 0]], 1) == 0
        with pytest.raises(ValueError):
            minors_gcd([[1, 0], [0, 1]], 3)

    def test_cokernel(self):
        assert cokernel(I3).is_trivial
        assert cokernel([[2], [0]]) == AbelianGroup(1, (2,))
        assert cokernel([[], [], []], cols=0) == AbelianGroup(3)
        assert str(cokernel([[2], [0]])) == "Z + Z/2"

    def test_group_validation(self):
        with pytest.raises(ValueError):
            AbelianGroup(0, (2, 3))
        with pytest.raises(ValueError):
            AbelianGroup(0, (1,))
        assert AbelianGroup.from_factors([1, 2, 6, 0], 4) == AbelianGroup(1, (2, 6))
        assert AbelianGroup(0, (2, 6)).order == 12
        assert AbelianGroup(1).order == 0


def _check_snf(m):
    factors, U, V = smith_normal_form(m)
    D = matmul(matmul(U, m), V)
    rows, cols = len(m), len(m[0])
    for i in range(rows):
        for j in range(cols):
            want = factors[i] if i == j and i < len(factors) else 0
            assert D[i][j] == want
    assert all(d > 0 for d in factors)
    assert all(b % a == 0 for a, b in zip(factors, factors[1:]))
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    return factors


@given(matrices())
def test_snf_transforms_diagonalize(m):
    _check_snf(m)


@given(matrices())
def test_snf_matches_sympy(m):
    ours = smith_normal_form(m)[0]
    theirs = sympy_snf(Matrix(m))
    diag = [abs(int(theirs[i, i])) for i in range(min(theirs.shape))]
    assert ours == [d for d in diag if d]


@given(matrices())
def test_minors_gcd_is_product_of_factors(m):
    factors = smith_normal_form(m)[0]
    for k in range(1, min(len(m), len(m[0])) + 1):
        prod = 1
        for d in (factors + [0] * k)[:k]:
            prod *= d
        assert minors_gcd(m, k) == prod


@pytest.mark.parametrize("shape", [(1, 1), (1, 3), (2, 1), (2, 2)])
def test_minors_gcd_exhaustive_small(shape):
    r, c = shape
    for flat in product(range(-3, 4), repeat=r * c):
        m = [list(flat[i * c:(i + 1) * c]) for i in range(r)]
        factors = _check_snf(m)
        for k in range(1, min(r, c) + 1):
            prod = 1
            for d in (factors + [0] * k)[:k]:
                prod *= d
            assert minors_gcd(m, k) == prod


def test_rank_one_minors_are_entry_gcd():
    for flat in product(range(-3, 4), repeat=3):
        assert minors_gcd([list(flat)], 1) == gcd(*flat)


@given(st.integers(1, 4).flatmap(
    lambda n: st.tuples(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                                 min_size=n, max_size=n),
                        unimodular(n), unimodular(n))))
def test_cokernel_invariant_under_unimodular_change(data):
    m, P, Q = data
    assert cokernel(matmul(matmul(P, m), Q)) == cokernel(m)


@given(st.integers(1, 4).flatmap(unimodular))
def test_inverse_unimodular(m):
    inv = inverse_unimodular(m)
    assert matmul(m, inv) == identity(len(m))


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        inverse_unimodular([[2, 0], [0, 1]])


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_cokernel_coords_respect_relations(m, x):
    q = CokernelMap(m, 3)
    for j in range(3):
        col = [m[i][j] for i in range(3)]
        assert q.is_zero(col)
        shifted = [a + b for a, b in zip(x, col)]
        assert q.coords(shifted) == q.coords(x)
