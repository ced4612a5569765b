from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gl2struct.parsing import ParseError, parse_poly, parse_ratfunc, parse_scalar
from gl2struct.poly import MultiPoly, RatFunc, ratfunc_sum
from gl2struct.scalars import GaussRational, I, render_scalar, to_gauss

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
gauss = st.builds(GaussRational, fractions, fractions)


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_render_parse_round_trip(z):
    assert parse_scalar(render_scalar(z)) == z


def test_render_examples():
    assert render_scalar(Fraction(1, 76)) == "1/76"
    assert render_scalar(GaussRational(Fraction(3, 4), Fraction(1, 2))) == "(3/4)+i(1/2)"
    assert render_scalar(-I) == "-i"
    assert render_scalar(2 - 3 * I) == "2-i(3)"


def test_conjugate_and_norm():
    z = GaussRational(3, -4)
    assert z.conjugate() == GaussRational(3, 4)
    assert z.norm() == 25
    assert (z * z.conjugate()).is_real


def test_to_gauss_rejects_floats():
    with pytest.raises(TypeError):
        to_gauss(0.5)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussRational(1) / 0


def test_parser_infix_and_juxtaposition():
    p = parse_poly("2p0 - (1/2)*p1^2 + i(3)p0*p1")
    q = 2 * MultiPoly.var("p0") - Fraction(1, 2) * MultiPoly.var("p1") ** 2 + 3 * I * MultiPoly.var("p0") * MultiPoly.var("p1")
    assert p == q


def test_parser_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_scalar("1 + ")
    assert info.value.pos >= 3


def test_parse_scalar_rejects_variables():
    with pytest.raises(ParseError):
        parse_scalar("p0")


def test_ratfunc_reduces():
    r = parse_ratfunc("(p0^2 - p1^2)/(p0 - p1)")
    assert r.is_polynomial()
    assert r == parse_ratfunc("p0 + p1")


def test_ratfunc_partial():
    r = parse_ratfunc("1/(1 + p0^2)")
    assert r.partial("p0") == parse_ratfunc("-2*p0/(1 + p0^2)^2")


small_polys = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=3)


def _poly(terms):
    return MultiPoly(("p0", "p1"), {(a, b): c for a, b, c in terms})


@settings(max_examples=40, deadline=None)
@given(small_polys, small_polys, small_polys, st.integers(-3, 3), st.integers(-3, 3))
def test_ratfunc_arithmetic_matches_evaluation(n1, n2, d, x0, y0):
    den = _poly(d) + MultiPoly.constant(7, ("p0", "p1")) * MultiPoly.var("p0", ("p0", "p1")) ** 4 + 100
    a = RatFunc(_poly(n1), den)
    b = RatFunc(_poly(n2), den * den + 1)
    pt = {"p0": x0, "p1": y0}
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert ratfunc_sum([a, b, -a]) == b


def test_evaluate_at_pole_raises():
    with pytest.raises(ZeroDivisionError):
        parse_ratfunc("1/p0").evaluate({"p0": 0})
