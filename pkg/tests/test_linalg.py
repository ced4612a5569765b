import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from gl2struct import linalg
from gl2struct.scalars import GaussRational, I

entries = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def square(n):
    return st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_det_matches_sympy(A):
    assert linalg.det(A) == sp.Matrix(A).det()


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_inverse_or_singular(A):
    if linalg.det(A) == 0:
        with pytest.raises(linalg.SingularMatrixError):
            linalg.inverse(A)
    else:
        assert linalg.matmul(A, linalg.inverse(A)) == linalg.identity(len(A))


def test_gaussian_solve():
    A = [[1, I], [2 * I, 3]]
    b = [GaussRational(1), GaussRational(0, 2)]
    x = linalg.solve(A, b)
    assert linalg.matvec(A, x) == b


def test_rank_of_rank_one():
    assert linalg.rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert linalg.rank([]) == 0


def test_det_non_square():
    with pytest.raises(ValueError):
        linalg.det([[1, 2]])
