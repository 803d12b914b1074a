import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wittkit.arith_fields import (
    FiniteField, FunctionField, PadicField, Rationals, RealClosed, SquareClosed, check_irreducible,
    is_square, is_sum_of_squares, orderings, parse_field, square_classes,
)
from wittkit.errors import DomainError, ParseError
from wittkit.polynomials import Poly

from oracles import squares_mod


def test_is_square_examples():
    assert not is_square(RealClosed(), -1)
    assert not is_square(PadicField(3), 3)
    assert is_square(FiniteField(7), 2)


def test_is_square_matches_enumeration_mod_p():
    for p in (3, 5, 7, 11, 13):
        sq = squares_mod(p)
        F = FiniteField(p)
        for a in range(1, p):
            assert is_square(F, a) == (a in sq)


def test_padic_square_rule():
    F = PadicField(5)
    assert is_square(F, 4) and is_square(F, 25 * 4) and is_square(F, Fraction(1, 25))
    assert not is_square(F, 2) and not is_square(F, 5) and not is_square(F, 10)
    assert is_square(PadicField(2), 17) and not is_square(PadicField(2), 5)


def test_zero_is_rejected():
    with pytest.raises(DomainError):
        is_square(Rationals(), 0)
    with pytest.raises(DomainError):
        is_sum_of_squares(FiniteField(5), 0)


def test_sum_of_squares_examples():
    assert is_sum_of_squares(Rationals(), 2)
    assert not is_sum_of_squares(Rationals(), -2)
    RT = FunctionField(RealClosed())
    assert not is_sum_of_squares(RT, RT.T())
    Q3T = FunctionField(PadicField(3))
    assert is_sum_of_squares(Q3T, Q3T.T())
    assert is_sum_of_squares(PadicField(3), -1)


def test_minus_one_is_sum_of_two_squares_in_q3():
    # 1 + 1 = 2 = -1 mod 3; Hensel lifts x^2 = -2 from x = 1 mod 3
    assert is_square(PadicField(3), -2)


def test_sum_of_squares_over_real_function_field_is_psd():
    QT = FunctionField(Rationals())
    f = QT.from_poly(QT.poly([1, 0, 1]))  # T^2 + 1
    assert is_sum_of_squares(QT, f)
    g = QT.mul(QT.T(), QT.from_poly(QT.linear(1)))  # T (T - 1)
    assert not is_sum_of_squares(QT, g)
    assert is_sum_of_squares(QT, QT.mul(g, g))


def test_square_classes():
    assert square_classes(PadicField(3)) == [1, 2, 3, 6]
    assert square_classes(RealClosed()) == [1, -1]
    assert square_classes(FiniteField(5)) == [1, 2]
    assert square_classes(Rationals()) is None
    assert square_classes(FunctionField(FiniteField(5))) is None
    assert square_classes(SquareClosed()) == [1]


def test_square_classes_closed_and_distinct():
    for F in (PadicField(3), PadicField(5), PadicField(7), FiniteField(5), FiniteField(9), RealClosed()):
        reps = square_classes(F)
        classes = {F.square_class(c) for c in reps}
        assert len(classes) == len(reps)
        for a in reps:
            for b in reps:
                assert F.square_class(F.mul(a, b)) in classes
                if a != b:
                    assert not F.is_square(F.div(a, b))


def test_orderings():
    assert orderings(PadicField(7)) == []
    assert len(orderings(Rationals())) == 1
    assert orderings(FunctionField(FiniteField(5))) == []


def test_parse_field():
    assert isinstance(parse_field("Q"), Rationals)
    assert parse_field("Qp(3)") == PadicField(3)
    assert parse_field("F(7)") == FiniteField(7)
    FF = parse_field("F(5)(T)")
    assert isinstance(FF, FunctionField) and FF.base == FiniteField(5)
    for bad in ("Z", "Qp(4)", "F(6)", "F(2)", "Q(T)(T)"):
        with pytest.raises(ParseError):
            parse_field(bad)


def test_irreducibility_against_sympy():
    sympy = pytest.importorskip("sympy")
    T = sympy.Symbol("T")
    rng = random.Random(0)
    for _ in range(60):
        cs = [rng.randint(-5, 5) for _ in range(rng.randint(2, 3))] + [1]
        got = check_irreducible(Rationals(), Poly(Rationals(), [Fraction(c) for c in cs]))
        want = sympy.Poly(sum(c * T ** i for i, c in enumerate(cs)), T).is_irreducible
        assert got == want
        got5 = check_irreducible(FiniteField(5), Poly(FiniteField(5), [c % 5 for c in cs]))
        want5 = sympy.Poly(sum(c * T ** i for i, c in enumerate(cs)), T, modulus=5).is_irreducible
        assert got5 == want5


nonzero = st.integers(-200, 200).filter(bool)


@given(nonzero, nonzero, st.integers(1, 50))
def test_square_class_invariant_under_squares_q(a, b, d):
    Q = Rationals()
    x = Fraction(a, d)
    assert is_square(Q, x * b * b) == is_square(Q, x)


@pytest.mark.parametrize("F", [PadicField(3), PadicField(5), FiniteField(7), RealClosed()],
                         ids=str)
def test_square_class_invariant_under_squares(F):
    rng = random.Random(1)
    for _ in range(1000):
        a = F.from_int(rng.choice([-1, 1]) * rng.randint(1, 300))
        b = F.from_int(rng.randint(1, 300))
        if F.is_zero(a) or F.is_zero(b):
            continue
        assert F.is_square(F.mul(a, F.mul(b, b))) == F.is_square(a)
