import random

import pytest

from wittkit.arith_fields import FiniteField, PadicField, Rationals, RealClosed
from wittkit.errors import DomainError, UnsupportedError
from wittkit.unit_groups import (
    gw_unit_sequence, is_unit, nq_class, represented_by_square_class, square_class_in_one_plus_nil,
    unit_decompose, unit_group, unit_inverse, verify_pushout_square,
)
from wittkit.witt_rings import GWClass, WittClass, is_nilpotent, witt_ring_elements

Q = Rationals()
Q3 = PadicField(3)


def quaternion_unit(p, a, b):
    return WittClass(PadicField(p), [1, 1, -a, -b, a * b])


def test_is_unit_examples():
    assert is_unit(WittClass.square(Q3, 6))
    assert is_unit(quaternion_unit(3, -1, 3))
    assert not is_unit(WittClass(Q, [1, 1]))
    assert is_unit(GWClass.square(Q, 5))


def test_inverse_examples():
    u = WittClass.square(Q3, 3)
    assert unit_inverse(u) == u
    a = WittClass(Q3, [1, -2])  # 2 = 1 + 1 so 2a = 0 and a^2 = 2a
    assert (a * a).is_zero()
    assert unit_inverse(1 + a) == 1 - a
    x = quaternion_unit(3, -1, 3)
    assert x * unit_inverse(x) == WittClass.one(Q3)
    with pytest.raises(DomainError):
        unit_inverse(WittClass(Q, [1, 1]))


def test_decompose_examples():
    d = unit_decompose(WittClass.square(Q, 7))
    assert (d.sign, d.square_class) == (1, 7) and d.nilpotent_part.is_zero()
    d = unit_decompose(WittClass.square(Q, -1))
    assert (d.sign, d.square_class) == (-1, 1) and d.nilpotent_part.is_zero()
    x = quaternion_unit(3, -1, 3)
    d = unit_decompose(x)
    assert d.sign == 1 and Q3.is_square(d.square_class)
    assert d.nilpotent_part == x - 1 and is_nilpotent(d.nilpotent_part)


def test_represented_by_square_class_examples():
    for p, a, b in ((3, -1, 3), (5, 2, 5), (7, 3, 7)):
        assert represented_by_square_class(quaternion_unit(p, a, b)) is None
    assert represented_by_square_class(WittClass.square(Q, 3)) == 3
    assert represented_by_square_class(WittClass.square(RealClosed(), -1)) == -1


@pytest.mark.parametrize("F", [PadicField(3), PadicField(5), PadicField(7), FiniteField(5)], ids=str)
def test_pushout_square(F):
    r = verify_pushout_square(F)
    assert r["ok"]
    if isinstance(F, PadicField):
        assert (r["witt_ring"], r["units"], r["square_classes"], r["quotient"]) == (16, 8, 4, "Z/2")
    else:
        assert r["witt_ring"] == 4 and r["quotient_order"] == 1
    with pytest.raises(UnsupportedError):
        verify_pushout_square(Q)


@pytest.mark.parametrize("F", [PadicField(3), PadicField(5), FiniteField(5)], ids=str)
def test_units_closed_and_decompose_exhaustive(F):
    units = unit_group(F)
    for x in units:
        assert unit_inverse(x) in units
        assert unit_decompose(x).recompose() == x
        for y in units:
            assert is_unit(x * y)
    assert set(units) == {x for x in witt_ring_elements(F) if is_unit(x)}


def _random_q_unit(rng):
    n = WittClass.zero(Q)
    for _ in range(rng.randint(0, 2)):
        a, b = rng.randint(1, 20), rng.randint(1, 20)
        n = n + WittClass(Q, [a, -b])
    n = n * WittClass(Q, [1, -rng.randint(1, 5)])  # lands in the torsion part of I
    return rng.choice([-1, 1]) * WittClass.square(Q, rng.randint(1, 30)) * (1 + n)


def test_random_rational_units():
    rng = random.Random(3)
    for _ in range(200):
        x, y = _random_q_unit(rng), _random_q_unit(rng)
        assert is_unit(x) and is_unit(x * y)
        assert x * unit_inverse(x) == WittClass.one(Q)
        assert unit_decompose(x).recompose() == x


def test_nq_examples():
    assert nq_class(WittClass.square(Q3, 2)) == nq_class(WittClass.one(Q3))
    assert nq_class(quaternion_unit(3, -1, 3)) != nq_class(WittClass.one(Q3))
    assert len(set(map(nq_class, unit_group(Q3)))) == 2


def test_gw_unit_sequence_q3():
    r = gw_unit_sequence(Q3)
    assert r["gw_units"] == 16 and r["kernel_size"] == 2 and r["surjective"]


def test_square_classes_in_one_plus_nil_are_sums_of_squares():
    for F in (PadicField(3), PadicField(5)):
        for u in F.square_classes():
            assert square_class_in_one_plus_nil(F, u) == F.is_sum_of_squares(u)
    assert square_class_in_one_plus_nil(Q, 2)
    assert not square_class_in_one_plus_nil(Q, -1)
    # <3> - 1 has signature 0, so it is torsion and therefore nilpotent; 3 = 1 + 1 + 1
    assert square_class_in_one_plus_nil(Q, 3)
    assert not square_class_in_one_plus_nil(Q, -3)
