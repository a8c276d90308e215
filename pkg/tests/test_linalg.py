from fractions import Fraction

import numpy as np
import sympy
from hypothesis import given
from hypothesis import strategies as st

from bisyz.linalg import DEFAULT_PRIME, is_probable_prime, kernel_basis_mod_p, rank_mod_p, rank_rational

matrices = st.integers(1, 6).flatmap(
    lambda rows: st.integers(1, 6).flatmap(
        lambda cols: st.lists(st.lists(st.integers(-4, 4), min_size=cols, max_size=cols),
                              min_size=rows, max_size=rows)))


def sparse(mat):
    return [{j: v for j, v in enumerate(row) if v} for row in mat]


@given(matrices)
def test_rational_rank_matches_sympy(mat):
    assert rank_rational(sparse(mat)) == sympy.Matrix(mat).rank()


@given(matrices)
def test_mod_p_rank_matches_for_small_entries(mat):
    # with |entries| <= 4 and size <= 6, minors stay far below 2^31 - 1
    assert rank_mod_p(sparse(mat), DEFAULT_PRIME) == sympy.Matrix(mat).rank()


def test_rational_rank_with_fractions():
    rows = [{0: Fraction(1, 2), 1: Fraction(1, 3)}, {0: Fraction(3), 1: Fraction(2)}]
    assert rank_rational(rows) == 1


@given(matrices)
def test_kernel_basis_is_a_kernel(mat):
    nrows, ncols = len(mat), len(mat[0])
    cols = [{i: mat[i][j] for i in range(nrows) if mat[i][j]} for j in range(ncols)]
    basis = kernel_basis_mod_p(cols, nrows, DEFAULT_PRIME)
    assert len(basis) == ncols - sympy.Matrix(mat).rank()
    A = np.array(mat, dtype=object)
    for vec in basis:
        v = np.array([vec.get(j, 0) for j in range(ncols)], dtype=object)
        assert all(int(e) % DEFAULT_PRIME == 0 for e in A.dot(v))


def test_primality():
    assert is_probable_prime(DEFAULT_PRIME)
    assert not is_probable_prime(2**31 + 1)
    assert is_probable_prime(1_000_000_007)
