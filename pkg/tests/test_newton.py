from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import kouchnirenko_number_2d, lower_hull_2d
from singspec.errors import NonIsolatedError, NotConvenientError
from singspec.localstd import milnor_number
from singspec.newton import (
    DEGENERATE,
    NONDEGENERATE,
    UNKNOWN,
    make_convenient,
    missing_pure_powers,
    newton_diagram,
    nondegeneracy_check,
    shifted_valuation,
    valuation,
    valuation_by_cone,
)
from singspec.poly import Polynomial, parse


def test_facets_of_two_edge_curve():
    d = newton_diagram(parse("x^6+x^3*y^2+y^5"))
    functionals = sorted(fc.functional for fc in d.facets)
    assert functionals == [(Fraction(1, 6), Fraction(1, 4)), (Fraction(1, 5), Fraction(1, 5))]
    assert d.convenient


def test_shifted_valuation_examples():
    d = newton_diagram(parse("x^6+x^3*y^2+y^5"))
    assert shifted_valuation(d, (0, 0)) == Fraction(2, 5)
    assert shifted_valuation(d, (1, 5)) == Fraction(8, 5)
    assert shifted_valuation(d, (1, 4)) == Fraction(7, 5)
    assert shifted_valuation(d, (5, 0)) == Fraction(5, 4)


def test_three_variable_diagram():
    d = newton_diagram(parse("x^3+y^4+y*z^2"))
    assert [fc.functional for fc in d.facets] == [(Fraction(1, 3), Fraction(1, 4), Fraction(3, 8))]


def test_valuation_requires_convenient():
    d = newton_diagram(parse("x^3*y+y^4"))
    assert not d.convenient
    with pytest.raises(NotConvenientError):
        valuation(d, (1, 1))


@pytest.mark.parametrize(
    "f, verdict",
    [
        ("x^2+y^2", NONDEGENERATE),
        ("x^2+2*x*y+y^2", DEGENERATE),
        ("x^4+x^2*y^3+y^6", NONDEGENERATE),
        ("x^4+2*x^2*y^3+y^6", DEGENERATE),
        ("x^3+x^2*y^3+y^9+z^2", NONDEGENERATE),
        ("x^3+y*z^2+x^2*y^2+x*y^4", UNKNOWN),
    ],
)
def test_nondegeneracy_verdicts(f, verdict):
    g = parse(f)
    assert set(nondegeneracy_check(g, newton_diagram(g))) == {verdict}


def test_missing_pure_powers_and_make_convenient():
    f = parse("x^4*y+y^6")
    assert missing_pure_powers(f) == [0]
    g = make_convenient(f)
    assert newton_diagram(g).convenient
    assert milnor_number(g) == milnor_number(f) == 19


def test_make_convenient_rejects_non_isolated():
    with pytest.raises(NonIsolatedError):
        make_convenient(parse("x^2*y"))


@st.composite
def convenient_curves(draw):
    a = draw(st.integers(min_value=2, max_value=9))
    b = draw(st.integers(min_value=2, max_value=9))
    inner = draw(st.lists(st.tuples(st.integers(1, 8), st.integers(1, 8)), max_size=3))
    terms = {(a, 0): 1, (0, b): 1}
    for m in inner:
        terms[m] = draw(st.integers(min_value=1, max_value=4))
    return Polynomial(2, terms)


@settings(max_examples=60, deadline=None)
@given(convenient_curves(), st.tuples(st.integers(0, 12), st.integers(0, 12)))
def test_valuation_agrees_with_cone_decomposition(f, v):
    d = newton_diagram(f)
    assert valuation(d, v) == valuation_by_cone(d, v)


@settings(max_examples=60, deadline=None)
@given(convenient_curves(), st.tuples(st.integers(0, 9), st.integers(0, 9)),
       st.tuples(st.integers(0, 9), st.integers(0, 9)), st.integers(1, 4))
def test_valuation_is_homogeneous_and_superadditive(f, u, v, k):
    d = newton_diagram(f)
    assert valuation(d, [k * a for a in u]) == k * valuation(d, u)
    assert valuation(d, [a + b for a, b in zip(u, v)]) >= valuation(d, u) + valuation(d, v)


@settings(max_examples=60, deadline=None)
@given(convenient_curves())
def test_support_points_have_valuation_at_least_one(f):
    d = newton_diagram(f)
    assert all(valuation(d, m) >= 1 for m in f.support)
    assert all(fc.value(v) == 1 for fc in d.facets for v in fc.vertices)


@settings(max_examples=60, deadline=None)
@given(convenient_curves())
def test_milnor_number_matches_kouchnirenko(f):
    d = newton_diagram(f)
    assume(all(v == NONDEGENERATE for v in nondegeneracy_check(f, d)))
    hull = lower_hull_2d(list(f.support))
    assert milnor_number(f) == kouchnirenko_number_2d(hull)
