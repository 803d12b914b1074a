import random

import pytest
from hypothesis import given, strategies as st

from wittkit.arith_fields import FiniteField, FunctionField, PadicField, Rationals, RealClosed
from wittkit.errors import DomainError
from wittkit.witt_rings import (
    GWClass, TorsionLevelElement, WittClass, boxplus, boxplus_inverse, in_fundamental_ideal,
    is_nilpotent, is_torsion, level_zero, torsion_elements, torsion_order, witt_ring_elements,
    witt_table,
)

Q = Rationals()
Q3 = PadicField(3)
W3 = witt_ring_elements(Q3)


def test_witt_class_examples():
    assert WittClass(Q, [1, -1]).is_zero()
    x = WittClass(Q, [1, 1, -3, -3])
    assert not x.is_zero() and torsion_order(x) == 2
    quat = WittClass(Q3, [1, 1, 3, 3])  # (-1, -3)_3 ... norm form of (-1, 3)_3 = -1
    assert not quat.is_zero()
    assert (x + (-x)).is_zero()
    assert 1 * x == x


def test_order_of_one_in_q3():
    one, y, n = WittClass.one(Q3), WittClass.one(Q3), 1
    while not y.is_zero():
        y, n = y + one, n + 1
    assert n == 4


def test_fundamental_ideal_torsion_nilpotent_examples():
    assert in_fundamental_ideal(WittClass.zero(Q))
    assert not in_fundamental_ideal(WittClass.square(Q3, 2))
    assert in_fundamental_ideal(WittClass(Q, [1, -3]))
    assert all(is_torsion(x) for x in witt_ring_elements(PadicField(5)))
    assert not is_torsion(WittClass(Q, [1, 1])) and torsion_order(WittClass(Q, [1, 1])) is None
    assert is_nilpotent(WittClass(Q, [1, 1, -3, -3]))
    assert not is_nilpotent(WittClass.square(Q3, 2))
    assert is_nilpotent(WittClass.zero(Q3))


def test_torsion_over_real_function_field():
    RT = FunctionField(RealClosed())
    T = RT.T()
    assert not is_torsion(WittClass(RT, [T]))
    assert is_torsion(WittClass(RT, [T, RT.neg(T)]))
    s = RT.from_poly(RT.poly([1, 0, 1]))
    assert is_torsion(WittClass(RT, [1, RT.neg(s)]))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sixteen_elements(p):
    assert len(witt_ring_elements(PadicField(p))) == 16


def test_ring_axioms_exhaustive_q3():
    table = witt_table(Q3)
    add, mul = table["add"], table["mul"]
    n = len(add)
    zero, one = table["elements"].index("[]"), table["elements"].index("[1]")
    for a in range(n):
        assert add[a][zero] == a and mul[a][one] == a
        assert any(add[a][b] == zero for b in range(n))
        for b in range(n):
            assert add[a][b] == add[b][a] and mul[a][b] == mul[b][a]
            for c in range(n):
                assert add[add[a][b]][c] == add[a][add[b][c]]
                assert mul[mul[a][b]][c] == mul[a][mul[b][c]]
                assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]


def test_nilpotent_iff_power_vanishes_q3():
    for x in W3:
        y, vanishes = x, x.is_zero()
        for _ in range(16):
            y = y * x
            vanishes = vanishes or y.is_zero()
        assert is_nilpotent(x) == vanishes


def test_nilpotent_iff_power_vanishes_q_sampled():
    rng = random.Random(2)
    for _ in range(200):
        x = WittClass(Q, [rng.randint(1, 9), -rng.randint(1, 9)])
        if rng.random() < 0.5:
            x = x + WittClass(Q, [-rng.randint(1, 9), rng.randint(1, 9)])
        y, vanishes = x, x.is_zero()
        for _ in range(4):
            y = y * x
            vanishes = vanishes or y.is_zero()
        assert is_nilpotent(x) == vanishes


def test_boxplus_examples():
    one = WittClass.one(Q3)
    assert boxplus(1, one, one).value.is_zero()
    assert boxplus_inverse(1, one).value == one
    assert boxplus_inverse(2, WittClass.zero(Q3)).value.is_zero()
    x = WittClass(Q, [1, -3, 1, -3])
    if (x * x).is_zero():
        assert boxplus(1, x, x).value.is_zero()
    for y in W3:
        assert boxplus(2, level_zero(Q3, 2), y).value == y
        if (y * y).is_zero():
            assert boxplus_inverse(3, y).value == -y


def test_boxplus_errors():
    with pytest.raises(DomainError):
        boxplus(1, TorsionLevelElement(2, WittClass.one(Q3)), WittClass.one(Q3))
    with pytest.raises(DomainError):
        boxplus(1, WittClass.one(Q), WittClass.zero(Q))
    with pytest.raises(DomainError):
        TorsionLevelElement(1, WittClass(Q, [1, 1]))


def test_level_zero_is_one_plus_nilradical():
    nil = [x for x in W3 if is_nilpotent(x)]
    for a in nil:
        assert boxplus(0, a, boxplus_inverse(0, a)).value.is_zero()
        for b in nil:
            assert 1 + boxplus(0, a, b).value == (1 + a) * (1 + b)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_boxplus_groups_exhaustive_q3(n):
    els = torsion_elements(Q3)
    for a in els:
        inv = boxplus_inverse(n, a).value
        assert boxplus(n, a, inv).value.is_zero() and boxplus(n, inv, a).value.is_zero()
        for b in els:
            ab = boxplus(n, a, b).value
            assert ab == boxplus(n, b, a).value
            for c in els[::3]:
                assert boxplus(n, ab, c) == boxplus(n, a, boxplus(n, b, c).value)


def test_gw_examples():
    H = GWClass(WittClass(Q, [1, -1]), 2)
    assert H.witt.is_zero() and H.rank == 2 and H != GWClass.zero(Q)
    assert H * H == GWClass(WittClass.zero(Q), 4) == 2 * H
    u = GWClass.square(Q3, 2)
    assert u * u == GWClass.one(Q3)
    with pytest.raises(DomainError):
        GWClass(WittClass.one(Q), 2)


def test_gw_unit_kernel_q3():
    units = [x for x in W3 if x.dim % 2 == 1]
    gw_units = [GWClass(w, r) for w in units for r in (1, -1)]
    one = GWClass.one(Q3)
    inverse_exists = lambda g: any(g * h == one for h in gw_units)
    assert all(inverse_exists(g) for g in gw_units if g.witt * g.witt == WittClass.one(Q3))
    kernel = [g for g in gw_units if g.witt == WittClass.one(Q3)]
    assert set(kernel) == {GWClass.one(Q3), -GWClass(WittClass(Q3, [-1]), 1)}


q3_elements = st.sampled_from(W3)
f5_torsion = st.sampled_from(torsion_elements(FiniteField(5)))


@given(q3_elements, q3_elements, q3_elements)
def test_ring_laws_q3(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a


@given(f5_torsion, f5_torsion, st.integers(0, 4))
def test_boxplus_closed_f5(a, b, n):
    assert is_torsion(boxplus(n, a, b).value)
