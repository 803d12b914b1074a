from fractions import Fraction

import pytest

from wittkit.arith_fields import FiniteField, FunctionField, PadicField, Rationals
from wittkit.errors import ParseError
from wittkit.parsing import parse_factored, parse_form, split_top_level
from wittkit.polynomials import Poly


def test_form_literals():
    q = parse_form("<1,-3,1,-3> over Q")
    assert q.field == Rationals() and list(q.entries) == [1, -3, 1, -3]
    q = parse_form("<1,u,p> over Qp(3)")
    assert list(q.entries) == [1, 2, 3]
    q = parse_form("<1/2, 3> over F(7)")
    assert q.field == FiniteField(7) and list(q.entries) == [4, 3]
    assert parse_form("<> over Q").dim == 0


def test_function_field_literals():
    q = parse_form("<1, T, -T> over Q(T)")
    FF = q.field
    assert q.entries[1] == FF.T() and q.entries[2] == FF.neg(FF.T())
    x = parse_factored(FF, "3 * (T-1)^2 * (T^2+1)^-1")
    assert x.const == 3
    assert x.exponent(FF.linear(1)) == 2 and x.exponent(FF.poly([1, 0, 1])) == -1
    assert FF.fmt(x) == "3*(T - 1)^2*(T^2 + 1)^-1"


def test_bad_literals():
    for bad in ("<1,0> over Q", "<1,2 over Q", "<1,2> over", "<x> over Q", "<1> over Z"):
        with pytest.raises(ParseError):
            parse_form(bad)


def test_split_top_level():
    assert split_top_level("(T), (T-1), f(1,2)") == ["(T)", " (T-1)", " f(1,2)"]
