from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaugedirac.scalars import (
    GaussRational,
    I,
    Jet,
    NormScalar,
    derivative,
    directional,
    format_rational,
    gr_arith,
    jet_var,
    rational,
)

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gauss = st.builds(GaussRational, fractions, fractions)


def test_product_of_conjugates():
    assert gr_arith(GaussRational(1, 1), GaussRational(1, -1), "mul") == GaussRational(2)


def test_conj_is_involution():
    z = GaussRational(Fraction(3, 2), Fraction(5, 7))
    assert gr_arith(gr_arith(z, None, "conj"), None, "conj") == z


def test_zero_annihilates():
    assert GaussRational(Fraction(1, 3), 1) * GaussRational(0) == 0


def test_unknown_operation():
    with pytest.raises(ValueError):
        gr_arith(I, I, "pow")


def test_floats_rejected():
    with pytest.raises(TypeError):
        rational(0.5)
    with pytest.raises(TypeError):
        GaussRational.coerce(1j)


def test_format_is_p_over_q():
    assert format_rational(Fraction(-7, 3)) == "-7/3"
    assert format_rational(Fraction(4)) == "4/1"
    assert str(GaussRational(0, Fraction(-1, 2))) == "0/1-1/2i"


@given(gauss)
def test_parse_round_trip(z):
    assert GaussRational.parse(str(z)) == z


@given(gauss, gauss, gauss)
def test_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y).conj() == x.conj() * y.conj()
    if y:
        assert (x / y) * y == x


def test_normscalar_units():
    s = NormScalar(Fraction(1, 24))
    assert s + s == NormScalar(Fraction(1, 12))
    assert s * 24 == NormScalar(1)
    assert sum([s, s, s]) == NormScalar(Fraction(1, 8))
    assert not NormScalar(0)
    with pytest.raises(TypeError):
        s + GaussRational(1)


def test_jet_truncates_second_order():
    # H(x + t d) = (x + t d)^2 keeps only the t^1 coefficient
    v = jet_var(GaussRational(3), GaussRational(2))
    out = v * v
    assert derivative(out, v) == GaussRational(12)


def test_derivative_of_constant_is_zero():
    assert directional(lambda x: GaussRational(5), GaussRational(1), GaussRational(1)) == 0


def test_nested_jets_give_second_derivative():
    x = GaussRational(2)
    cube = lambda y: y * y * y  # noqa: E731
    second = directional(lambda y: directional(cube, y, GaussRational(1)), x, GaussRational(1))
    assert second == GaussRational(12)


@given(gauss, gauss, gauss)
def test_jet_product_rule(x, d, c):
    # d/dt [c (x + t d)^2] = 2 c x d
    assert directional(lambda y: y * y * c, x, d) == x * d * c * 2


def test_jet_repr_mentions_tag():
    assert "Jet" in repr(Jet(1, GaussRational(1), None))
