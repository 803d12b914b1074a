import random

import pytest
from hypothesis import given, strategies as st

from wittkit.arith_fields import FiniteField, FunctionField, PadicField, Rationals, RealClosed
from wittkit.errors import DomainError, ParseError, UnsupportedError
from wittkit.polynomials import Poly
from wittkit.residue_theory import (
    SCENARIOS, ValuationSpec, axiom_checks, contraction_classify, contraction_witness,
    first_residue, infinity_residue, is_unramified, lift_constant, milnor_lift, milnor_total_residue,
    parse_support, second_residue, specialization, torsion_level_residue, unit_residue,
    units_residue_sequence_check,
)
from wittkit.witt_rings import (
    GWClass, WittClass, boxplus, is_torsion, torsion_elements, witt_ring_elements,
)

Q3 = PadicField(3)
Q3T = FunctionField(Q3)
F5T = FunctionField(FiniteField(5))
RT = FunctionField(RealClosed())
QT = FunctionField(Rationals())
TORS3 = torsion_elements(Q3)


def at(FF, r):
    return ValuationSpec.at(FF, r)


def P(FF, v):
    return WittClass.square(FF, v.uniformizer)


def test_valuation_spec_validation():
    with pytest.raises(DomainError):
        ValuationSpec.padic(2)
    with pytest.raises(DomainError):
        ValuationSpec(QT, "monic", poly=QT.poly([-1, 0, 1]))  # T^2 - 1 is reducible
    with pytest.raises(DomainError):
        ValuationSpec.at(Q3T, 0, twist=Q3T.T())
    with pytest.raises(ParseError):
        parse_support(Q3T, "T,3")
    v = ValuationSpec.at(QT, "T^2+1")
    assert v.label == "(T^2 + 1)" and not v.irreducibility_asserted
    assert ValuationSpec.padic(5).residue_field == FiniteField(5)


def test_second_residue_examples():
    for FF in (Q3T, QT, F5T):
        v = at(FF, 0)
        assert second_residue(v, WittClass.square(FF, v.uniformizer)) == WittClass.one(FF.base)
        assert second_residue(v, WittClass.square(FF, FF.make(2))).is_zero()
        T = FF.T()
        for c in (1, 2, 3):
            got = second_residue(v, WittClass(FF, [1, FF.mul(T, FF.make(c)), FF.make(c)]))
            assert got == WittClass.square(FF.base, c)
    v = ValuationSpec.padic(3)
    assert second_residue(v, WittClass(Rationals(), [3, 6, 5])) == WittClass(FiniteField(3), [1, 2])


def test_specialization_examples():
    v = at(Q3T, 0)
    assert specialization(v, WittClass.square(Q3T, Q3T.make(2))) == WittClass.square(Q3, 2)
    assert specialization(v, WittClass.one(Q3T)) == WittClass.one(Q3)
    rng = random.Random(0)
    for _ in range(100):
        c = rng.choice([-1, 1]) * rng.randint(1, 40)
        if c % 3 == 0:
            continue
        x = WittClass(Q3T, [1, Q3T.mul(Q3T.make(c), Q3T.from_poly(Q3T.linear(-1)))])
        assert specialization(v, x) == WittClass(Q3, [1, c])
    with pytest.raises(DomainError):
        specialization(v, WittClass.square(Q3T, Q3T.T()))
    g = specialization(v, GWClass(WittClass(Q3T, [1, 1]), 2))
    assert isinstance(g, GWClass) and g.rank == 2


def test_specialization_independent_of_uniformizer():
    rng = random.Random(1)
    for _ in range(100):
        twist = rng.choice([2, 5, 7, -1])
        v, w = at(Q3T, 0), ValuationSpec.at(Q3T, 0, twist=Q3T.make(twist))
        c = rng.choice([1, 2, 5, 7])
        e = rng.choice([2, -2, 4])
        x = WittClass(Q3T, [Q3T.make(c, {Poly.x(Q3): e}), Q3T.make(-rng.randint(1, 8))])
        assert specialization(v, x) == specialization(w, x)
    # the second residue does depend on the choice
    v, w = at(Q3T, 0), ValuationSpec.at(Q3T, 0, twist=Q3T.make(2))
    x = WittClass.square(Q3T, Q3T.T())
    assert second_residue(v, x) != second_residue(w, x)


def test_is_unramified_examples():
    v = at(Q3T, 0)
    assert is_unramified(v, WittClass.square(Q3T, Q3T.make(5)))
    assert not is_unramified(v, WittClass.square(Q3T, Q3T.T()))
    x = 1 + (P(Q3T, v) - 1) * WittClass.square(Q3T, Q3T.make(2))
    assert not is_unramified(v, x)


def test_unit_residue_examples_and_kernel():
    v = at(Q3T, 0)
    assert unit_residue(v, WittClass.one(Q3T)).value.is_zero()
    for a in TORS3:
        assert unit_residue(v, 1 + (P(Q3T, v) - 1) * lift_constant(Q3T, a)).value == a
    rng = random.Random(2)
    nil = [x for x in witt_ring_elements(Q3) if x.dim % 2 == 0]
    for _ in range(100):
        n = lift_constant(Q3T, rng.choice(nil))
        x = 1 + n * WittClass.square(Q3T, Q3T.from_poly(Q3T.linear(rng.randint(1, 4)), 2))
        assert unit_residue(v, x).value.is_zero() and is_unramified(v, x)
    # over Q3(T) every <f> - 1 is nilpotent, so <T> is a legitimate input
    assert unit_residue(v, WittClass.square(Q3T, Q3T.T())).value == WittClass.one(Q3)
    with pytest.raises(DomainError):
        unit_residue(at(RT, 0), WittClass.square(RT, RT.T()))


def _random_one_plus_itor(FF, rng, pool, places):
    x = WittClass.one(FF)
    for _ in range(rng.randint(1, 2)):
        pi = WittClass.square(FF, FF.from_poly(rng.choice(places)))
        x = x * (1 + (pi - 1) * lift_constant(FF, rng.choice(pool)))
    return x


@pytest.mark.parametrize("FF", [Q3T, F5T], ids=str)
def test_unit_residue_multiplicative(FF):
    rng = random.Random(3)
    pool = torsion_elements(FF.base)
    places = [FF.linear(c) for c in (0, 1, 2)]
    v = at(FF, 0)
    for _ in range(250):
        x = _random_one_plus_itor(FF, rng, pool, places)
        y = _random_one_plus_itor(FF, rng, pool, places)
        assert unit_residue(v, x * y) == boxplus(1, unit_residue(v, x), unit_residue(v, y))


def test_torsion_level_residue():
    v = at(Q3T, 0)
    assert torsion_level_residue(1, v, WittClass.zero(Q3T)).value.is_zero()
    for n in (1, 2, 3):
        for a in TORS3:
            got = torsion_level_residue(n, v, (P(Q3T, v) - 1) * lift_constant(Q3T, a))
            # read at level n + 1 the residue of (<pi> - 1) a~ is a * (1 + (-2)^n (1 - 1 + 1) a)^-1
            assert got.level == n + 1
            assert boxplus(n + 1, got.value, WittClass.zero(Q3)).value == got.value
    with pytest.raises(DomainError):
        torsion_level_residue(33, v, WittClass.zero(Q3T))
    with pytest.raises(DomainError):
        torsion_level_residue(1, at(RT, 0), WittClass.square(RT, RT.T()))


def test_torsion_level_residue_homomorphism():
    rng = random.Random(4)
    v = at(Q3T, 0)
    pi = P(Q3T, v)
    u = WittClass.square(Q3T, Q3T.from_poly(Q3T.linear(1)))
    for _ in range(500):
        n = rng.choice([1, 2, 3])
        a = lift_constant(Q3T, rng.choice(TORS3)) + pi * lift_constant(Q3T, rng.choice(TORS3))
        b = lift_constant(Q3T, rng.choice(TORS3)) + u * lift_constant(Q3T, rng.choice(TORS3))
        ab = boxplus(n, a, b)
        assert torsion_level_residue(n, v, ab) == boxplus(
            n + 1, torsion_level_residue(n, v, a), torsion_level_residue(n, v, b))


def test_contraction_examples():
    v = at(RT, 0)
    c = contraction_classify(v, WittClass.square(RT, RT.T()))
    assert c.a_present and c.a_component == 1
    w = at(Q3T, 0)
    assert contraction_classify(w, WittClass.square(Q3T, Q3T.make(2))).is_trivial()
    x = 1 + (P(Q3T, w) - 1) * WittClass.square(Q3T, Q3T.make(2))
    c = contraction_classify(w, x)
    assert not c.a_present and c.a_component == 0 and c.torsion_component.value == WittClass.square(Q3, 2)
    with pytest.raises(DomainError):
        contraction_classify(w, WittClass(Q3T, [1, 1]))


def test_contraction_witness_round_trip():
    for FF in (Q3T, RT):
        v = at(FF, 0)
        a_present = not v.is_sum_of_squares_uniformizer()
        for e in ((0, 1) if a_present else (0,)):
            for b in torsion_elements(FF.base):
                c = contraction_classify(v, contraction_witness(v, e, b))
                assert (c.a_component, c.torsion_component.value) == (e, b)


def _random_unit(FF, rng, places):
    k = FF.base
    x = GWClass.one(FF)
    for _ in range(rng.randint(1, 2)):
        f = FF.from_poly(rng.choice(places), rng.choice([1, -1, 3]))
        c = FF.make(rng.choice(k.square_classes()))
        x = x * GWClass.square(FF, FF.mul(c, f))
        if not k.is_real:
            b = lift_constant(FF, rng.choice(torsion_elements(k)))
            x = x * GWClass(1 + (WittClass.square(FF, f) - 1) * b, 1)
    return x


@pytest.mark.parametrize("FF", [Q3T, RT], ids=str)
def test_contraction_is_homomorphism(FF):
    rng = random.Random(5)
    places = [FF.linear(c) for c in (0, 1, -1)]
    v = at(FF, 0)
    for _ in range(500):
        x, y = _random_unit(FF, rng, places), _random_unit(FF, rng, places)
        assert contraction_classify(v, x * y) == contraction_classify(v, x).combine(contraction_classify(v, y))


def test_milnor_examples():
    assert milnor_total_residue(WittClass(QT, [2, -5])) == {}
    T = QT.T()
    assert milnor_total_residue(WittClass.square(QT, T)) == {Poly.x(Rationals()): WittClass.one(Rationals())}
    x = WittClass(QT, [T, QT.neg(QT.from_poly(QT.linear(1)))])
    got = milnor_total_residue(x)
    assert got == {QT.linear(0): WittClass.one(Rationals()), QT.linear(1): WittClass.square(Rationals(), -1)}
    assert milnor_lift(QT, {}).is_zero()
    c = WittClass.square(Rationals(), 7)
    lifted = milnor_lift(QT, {QT.linear(0): c})
    assert milnor_total_residue(lifted) == {QT.linear(0): c}
    a = WittClass(Rationals(), [1, -3])
    assert is_torsion(milnor_lift(QT, {QT.linear(2): a}))
    with pytest.raises(UnsupportedError):
        milnor_lift(QT, {QT.poly([1, 0, 1]): c})


def test_infinity_residue_outside_sequence():
    T = Q3T.T()
    x = WittClass.square(Q3T, T)
    assert infinity_residue(x) == WittClass.one(Q3)
    assert first_residue(ValuationSpec.infinity(Q3T), WittClass.square(Q3T, Q3T.mul(T, T))) == WittClass.one(Q3)


def test_milnor_round_trip_exhaustive_two_places():
    places = [Q3T.linear(0), Q3T.linear(1)]
    for a in TORS3:
        for b in TORS3:
            want = {p: w for p, w in zip(places, (a, b)) if not w.is_zero()}
            assert milnor_total_residue(milnor_lift(Q3T, dict(zip(places, (a, b))))) == want


def test_units_residue_sequence():
    r = units_residue_sequence_check(Q3, parse_support(Q3T, "T,T-1"), samples=20, seed=1)
    assert r["ok"] and r["targets_per_place"] == {"(T)": 16, "(T - 1)": 16}
    r = units_residue_sequence_check(RealClosed(), parse_support(RT, "T,T-1"), samples=20, seed=1)
    assert r["ok"]
    r = units_residue_sequence_check(Rationals(), parse_support(QT, "T"), samples=5, seed=1)
    assert r["ok"]


def test_axiom_a2_example():
    f = QT.mul(QT.from_poly(QT.linear(1)), QT.from_poly(QT.linear(-1), -1))
    x = WittClass.square(QT, f)
    ram = {p for p in (QT.linear(c) for c in range(-3, 4)) if not is_unramified(ValuationSpec.at(QT, p), x)}
    assert ram == {QT.linear(1), QT.linear(-1)}


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_axiom_scenarios(scenario):
    r = axiom_checks(Q3, scenario, samples=200, seed=9)
    assert r["ok"], r["failures"][:3]


def test_axiom_unknown_scenario():
    with pytest.raises((DomainError, UnsupportedError)):
        axiom_checks(Q3, "A4")


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3).filter(bool), st.sampled_from([1, 2, 3, 6])),
                min_size=1, max_size=4))
def test_residue_ignores_other_places(data):
    entries = [Q3T.make(c, {Q3T.linear(r): e}) for r, e, c in data]
    x = WittClass(Q3T, entries)
    v = at(Q3T, 0)
    odd = [a for a in entries if Q3T.valuation(a, v.poly) % 2]
    assert second_residue(v, x) == second_residue(v, odd)
