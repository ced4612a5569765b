from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gl2struct import linalg
from gl2struct.binary_forms import BinaryForm, Gl2Matrix, x_family
from gl2struct.complex_structure import (
    complex_basis_change, jk_matrix, render_xi_row, to_complex_frame, v_basis, xi_basis,
)
from gl2struct.rep import rep_group
from gl2struct.scalars import GaussRational, I

q = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def _row_times(row, M):
    n = len(row)
    return [sum((row[i] * M[i][j] for i in range(n)), GaussRational(0)) for j in range(n)]


@pytest.mark.parametrize("k", range(1, 8))
def test_j_squares_to_minus_one(k):
    J = jk_matrix(k)
    J2 = linalg.matmul(J.rows(), J.rows())
    n = k + 1
    if k % 2:
        assert J2 == [[-1 if i == j else 0 for j in range(n)] for i in range(n)]
        assert J.annihilated is None
    else:
        w = J.annihilated
        assert w == BinaryForm([1, 0, 1]) ** (k // 2)
        assert J.apply(w).is_zero()
        for V in v_basis(k)[0][:-1]:
            assert J.apply(J.apply(V)) == -V


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), q, q)
def test_j_commutes_with_co2(k, u, v):
    if not (u or v):
        return
    J = jk_matrix(k).rows()
    G = rep_group(k, Gl2Matrix.co2(u, v)).rows()
    assert linalg.matmul(J, G) == linalg.matmul(G, J)


@pytest.mark.parametrize("k", range(1, 8))
def test_xi_rows_are_type_10(k):
    J = jk_matrix(k).rows()
    for row in xi_basis(k).rows:
        assert _row_times(row, J) == [I * c for c in row]


@pytest.mark.parametrize("k", range(1, 8))
def test_xi_pairs_with_x_family(k):
    xb = xi_basis(k)
    for j in range(len(xb.rows)):
        for l in range(k + 1):
            assert xb.pair(j, x_family(k, l)) == (2 if j == l else 0)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([1, 3, 4, 5]), q, q)
def test_xi_rows_scale_under_co2(k, u, v):
    if not (u or v):
        return
    G = rep_group(k, Gl2Matrix.co2(u, v)).rows()
    for row in xi_basis(k).rows:
        moved = _row_times(row, G)
        pivot = next(i for i, c in enumerate(row) if c)
        c = moved[pivot] / row[pivot]
        assert c != 0
        assert moved == [c * r for r in row]


def test_render_small_degrees():
    assert [render_xi_row(r) for r in xi_basis(1).rows] == ["ω^0+iω^1"]
    assert [render_xi_row(r) for r in xi_basis(2).rows] == ["(1/2)(ω^0-ω^2+iω^1)"]
    assert [render_xi_row(r) for r in xi_basis(3).rows] == [
        "(1/4)(ω^0-ω^2+i(ω^1-ω^3))", "(1/4)(3ω^0+ω^2+i(ω^1+3ω^3))"]


def test_degree_five_rows():
    assert [render_xi_row(r) for r in xi_basis(5).rows] == [
        "(1/16)(ω^0-ω^2+ω^4+i(ω^1-ω^3+ω^5))",
        "(1/16)(5ω^0-ω^2-3ω^4+i(3ω^1+ω^3-5ω^5))",
        "(1/8)(5ω^0+ω^2+ω^4+i(ω^1+ω^3+5ω^5))",
    ]


def test_render_plain_and_negative_imaginary():
    assert render_xi_row([GaussRational(2), GaussRational(0, -1)]) == "2ω^0+i(-ω^1)"
    assert render_xi_row([0, 0]) == "0"


@pytest.mark.parametrize("k", [3, 4, 5])
def test_frame_change_preserves_pairings(k):
    n = k + 1
    v = [Fraction(i + 1, 3) for i in range(n)]
    w = [Fraction(2 - i, 1) for i in range(n)]
    a = [Fraction(i * i - 1, 2) for i in range(n)]
    T = [[Fraction(i - j, 1 + i + j) for j in range(n)] for i in range(n)]
    vc = to_complex_frame(k, v, "vector")
    wc = to_complex_frame(k, w, "vector")
    ac = to_complex_frame(k, a, "covector")
    Tc = to_complex_frame(k, T, "2form")
    assert sum(x * y for x, y in zip(ac, vc)) == sum(x * y for x, y in zip(a, v))
    lhs = sum(Tc[A][B] * vc[A] * wc[B] for A in range(n) for B in range(n))
    assert lhs == sum(T[i][j] * v[i] * w[j] for i in range(n) for j in range(n))


def test_frame_change_bad_input():
    with pytest.raises(ValueError):
        to_complex_frame(3, [1, 2], "vector")
    with pytest.raises(ValueError):
        to_complex_frame(3, [1, 2, 3, 4], "spinor")


def test_basis_change_labels():
    assert complex_basis_change(3).labels() == ["xi0", "xi1", "xibar0", "xibar1"]
    assert complex_basis_change(4).labels()[-1] == "w0"
