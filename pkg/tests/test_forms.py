import random

import pytest
from hypothesis import given, settings, strategies as st

from gl2struct.forms import (
    Coframe, DForm, Patch, SingularCoframeError, evaluate_at, ext_d, structure_functions,
    structure_residual, wedge,
)
from gl2struct.geometry import builtin_structure
from gl2struct.selftest import random_form, unipotent_coframe

P3 = Patch.standard(3)


def dp(a, patch=P3):
    return DForm.dp(patch, a)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
def test_graded_commutativity(seed, da, db):
    rng = random.Random(seed)
    P = Patch.standard(5)
    a, b = random_form(rng, P, da), random_form(rng, P, db)
    assert wedge(a, b) == wedge(b, a).scale((-1) ** (da * db))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3))
def test_d_squared(seed, deg):
    rng = random.Random(seed)
    assert ext_d(ext_d(random_form(rng, Patch.standard(5), deg))).is_zero()


def test_d_of_function_and_one_form():
    f = DForm.function(P3, "p0^2*p1")
    assert ext_d(f) == dp(0).scale("2*p0*p1") + dp(1).scale("p0^2")
    alpha = dp(2).scale("p1")
    assert ext_d(alpha) == wedge(dp(1), dp(2))


def test_d_of_rational_coefficient():
    alpha = dp(1).scale("1/(1+p0^2)")
    assert ext_d(alpha).coefficient(0, 1) == P3.coerce("-2*p0/(1+p0^2)^2")


def test_wedge_repeated_index_vanishes():
    assert wedge(dp(1), dp(1)).is_zero()
    assert (dp(0) ^ dp(1)).coefficient(1, 0) == -1


def test_on_vectors_determinant_convention():
    w = dp(0) ^ dp(1)
    assert w.on_vectors([1, 0, 0], [0, 1, 0]) == 1
    assert w.on_vectors([0, 1, 0], [1, 0, 0]) == -1
    with pytest.raises(ValueError):
        w.on_vectors([1, 0, 0])


def test_evaluate_at_names_singular_coefficient():
    alpha = dp(1).scale("1/p0")
    assert evaluate_at(alpha, [2, 0, 0]) == {(1,): 1 / evaluate_at(DForm.function(P3, "p0"), [2, 0, 0])[()]}
    with pytest.raises(ZeroDivisionError, match="dp1"):
        evaluate_at(alpha, [0, 1, 1])


def test_patch_rejects_foreign_variables():
    with pytest.raises(ValueError):
        dp(0).scale("q7")
    with pytest.raises(ValueError):
        Patch(("p0", "p0"))


def test_frame_is_dual():
    eta = Coframe.from_matrix(P3, [[1, "p2", 0], [0, 1, "p0"], [0, 0, "1+p1^2"]])
    for i, f in enumerate(eta.forms):
        for j, e in enumerate(eta.frame):
            assert f.on_vectors(e) == (1 if i == j else 0)


def test_singular_coframe():
    eta = Coframe.from_matrix(P3, [[1, 0, 0], [0, 1, 0], [1, 1, 0]])
    with pytest.raises(SingularCoframeError):
        eta.frame
    pointwise = Coframe.from_matrix(P3, [[1, 0, 0], [0, "p0", 0], [0, 0, 1]])
    with pytest.raises(SingularCoframeError):
        pointwise.check_points([[0, 1, 1]])


def test_shear_structure_function():
    eta = builtin_structure("shear", 3).coframe
    sf = structure_functions(eta)
    assert sf.get(0, 1, 2) == 1
    assert sf.get(0, 2, 1) == -1
    assert sum(1 for v in sf.c.values() if not v.is_zero()) == 1


@pytest.mark.parametrize("seed", range(5))
def test_structure_round_trip(seed):
    eta = unipotent_coframe(random.Random(seed), 4)
    assert all(r.is_zero() for r in structure_residual(eta, structure_functions(eta)))


def test_coframe_json_round_trip():
    eta = Coframe.from_matrix(P3, [[1, "p2", 0], [0, 1, "p0/(1+p1)"], [0, 0, 1]])
    again = Coframe.from_json(eta.to_json())
    assert again.forms == eta.forms


def test_coframe_json_errors():
    with pytest.raises(ValueError):
        Coframe.from_json({"vars": ["p0"]})
    with pytest.raises(ValueError):
        Coframe.from_json({"vars": ["p0"], "forms": [[{"coeff": "1", "d": 3}]]})
