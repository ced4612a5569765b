import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gl2struct import linalg
from gl2struct.binary_forms import Gl2Matrix
from gl2struct.normalization import (
    ConnectionCorrection, SingularSystemError, TorsionTensor, apply_correction, block_determinant,
    bryant_torsion, build_normalization, closed_form_determinant, contractions_in_perp, perp_conditions,
    perp_test, perp_values,
)
from gl2struct.rep import rep_algebra
from gl2struct.selftest import random_torsion

q = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def _trace_form(k, M):
    """tr(rep(E) M) for the four elementary matrices."""
    out = []
    for a, b in ((1, 1), (2, 1), (1, 2), (2, 2)):
        R = rep_algebra(k, Gl2Matrix.elementary(a, b)).rows()
        out.append(sum(R[i][j] * M[j][i] for i in range(k + 1) for j in range(k + 1)))
    return out


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6).flatmap(lambda k: st.lists(st.lists(q, min_size=k + 1, max_size=k + 1),
                                                   min_size=k + 1, max_size=k + 1)))
def test_functionals_span_the_trace_annihilator(M):
    k = len(M) - 1
    assert perp_test(k, M) == all(v == 0 for v in _trace_form(k, M))


@pytest.mark.parametrize("k", range(1, 7))
def test_image_of_gl2_has_no_perp_part_only_when_zero(k):
    # g_k and g_k^perp intersect trivially: a nonzero rep matrix never passes
    for a in (1, 2):
        for b in (1, 2):
            assert not perp_test(k, rep_algebra(k, Gl2Matrix.elementary(a, b)).rows())


def test_perp_functionals_k3_tables():
    mats = perp_conditions(3).as_matrices()
    assert [mats[1][i][i] for i in range(4)] == [3, 1, -1, -3]
    assert [mats[2][i][i + 1] for i in range(3)] == [3, 2, 1]
    assert [mats[3][i][i - 1] for i in range(1, 4)] == [1, 2, 3]


def test_perp_values_shape_check():
    with pytest.raises(ValueError):
        perp_values(3, [[1, 2], [3, 4]])


def test_torsion_antisymmetry_and_json():
    T = TorsionTensor(3, {(0, 2, 1): Fraction(1, 2), (1, 0, 3): 5})
    assert T.get(0, 1, 2) == Fraction(-1, 2)
    assert T.get(0, 2, 1) == Fraction(1, 2)
    assert TorsionTensor.from_json(T.to_json()) == T
    assert TorsionTensor.from_components(3, T.components()) == T
    with pytest.raises(ValueError):
        TorsionTensor(3, {(0, 1, 1): 1})
    with pytest.raises(ValueError):
        TorsionTensor(3, {(0, 1, 4): 1})


def test_correction_is_linear():
    rng = random.Random(3)
    k = 3
    keys = [(ab, m) for m in range(k + 1) for ab in ("11", "21", "12", "22")]
    p1 = ConnectionCorrection(k, {key: Fraction(rng.randint(-3, 3)) for key in keys})
    p2 = ConnectionCorrection(k, {key: Fraction(rng.randint(-3, 3)) for key in keys})
    theta = random_torsion(rng, k)
    lhs = apply_correction(theta, p1 + p2)
    rhs = apply_correction(apply_correction(theta, p1), p2)
    assert lhs == rhs


def test_correction_by_identity_shifts_torsion():
    # psi = Id omega^m changes T^i_{ml} by -k for i = l
    k = 3
    values = {(ab, m): 0 for m in range(k + 1) for ab in ("11", "21", "12", "22")}
    values[("11", 0)] = values[("22", 0)] = 1
    T = apply_correction(TorsionTensor.zero(k), ConnectionCorrection(k, values))
    assert T.get(2, 0, 2) == -k and T.get(1, 0, 2) == 0


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_normalize_lands_in_perp_and_is_idempotent(k):
    rng = random.Random(k)
    op = build_normalization(k)
    for _ in range(5):
        theta = random_torsion(rng, k, density=0.5)
        fixed, psi = op.normalize(theta)
        assert contractions_in_perp(fixed)
        assert op.solve(fixed).is_zero()


@pytest.mark.parametrize("k", [1, 2])
def test_low_degrees_are_singular(k):
    with pytest.raises(SingularSystemError):
        build_normalization(k)


def test_block_determinants():
    assert [block_determinant(k).value for k in range(3, 10)] == [
        1890, 46592, 504000, 3456000, 17544450, 71751680, 249080832]
    for k in range(3, 10):
        assert closed_form_determinant(k) == block_determinant(k).value


def test_block_structure_k5():
    rep = block_determinant(5)
    assert sorted(rep.interior) == [1, 2, 3, 4]
    sizes = sorted(len(b["unknowns"]) for b in rep.boundary)
    assert sizes == [1, 1, 3, 3]
    assert sorted(b["determinant"] for b in rep.boundary if len(b["unknowns"]) == 1) == ["-30", "-30"]


def test_block_report_low_degrees():
    assert block_determinant(2).value == 0
    rep = block_determinant(1)
    assert rep.value is None and rep.full_determinant == 0
    assert rep.shape_note


def test_product_of_blocks_is_full_determinant():
    k = 4
    rep = block_determinant(k)
    A = [list(r) for r in build_normalization(k).matrix]
    total = rep.value ** len(rep.interior)
    for b in rep.boundary:
        total *= Fraction(b["determinant"])
    assert abs(total) == abs(linalg.det(A))


def test_bryant_numeric_instance():
    tau = [Fraction(i - 3, 1 + i) for i in range(8)]
    theta = bryant_torsion(tau)
    assert contractions_in_perp(theta)
    assert build_normalization(3).solve(theta).is_zero()
    with pytest.raises(ValueError):
        bryant_torsion([1, 2, 3])
