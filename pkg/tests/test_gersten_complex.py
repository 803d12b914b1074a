import random

import pytest

from wittkit.arith_fields import FiniteField, FunctionField, PadicField, Rationals, RealClosed, SquareClosed
from wittkit.errors import DomainError, UnsupportedError
from wittkit.gersten_complex import (
    build_complex, check_d_squared, exact_diagram_check, h0, h1_consistency, h1_p1,
    is_orientable_ST, line_bundle_class, line_bundle_h1_image, orientation_character,
    random_supported_unit, sphere_cohomology,
)
from wittkit.residue_theory import ValuationSpec, lift_constant, parse_support
from wittkit.witt_rings import GWClass, WittClass

Q3, R, F5 = PadicField(3), RealClosed(), FiniteField(5)


def support(k, text):
    return parse_support(FunctionField(k), text)


def test_build_complex_examples():
    d = build_complex(Q3, "P1", "GWx", support(Q3, "T,inf")).describe()
    assert [c["order"] for c in d["degree1"]] == [16, 16]
    assert d["A"] == {"(T)": False, "inf": False}
    d = build_complex(R, "P1", "GWx", support(R, "T,inf")).describe()
    assert [c["order"] for c in d["degree1"]] == [2, 2]
    assert d["A"] == {"(T)": True, "inf": True}
    d = build_complex(F5, "DVR", "Wtor", support(F5, "T"), level=1).describe()
    assert len(d["degree1"]) == 1 and d["degree1"][0]["group"] == "W(F(5))_tor^(2)"


def test_p1_always_contains_infinity():
    cx = build_complex(Q3, "P1", "Gm2", support(Q3, "T"))
    assert [v.label for v in cx.support] == ["(T)", "inf"]


def test_unsupported_combinations():
    with pytest.raises((DomainError, UnsupportedError)):
        build_complex(Q3, "P2", "GWx", support(Q3, "T"))
    with pytest.raises((DomainError, UnsupportedError)):
        build_complex(Q3, "P1", "K2", support(Q3, "T"))


@pytest.mark.parametrize("sheaf", ["GWx", "Gm2", "1+Itor", "NQ", "Wtor"])
def test_d_squared_is_vacuous_on_curves(sheaf):
    r = check_d_squared(build_complex(Q3, "P1", sheaf, support(Q3, "T,T-1")))
    assert r["ok"] and r["vacuous"]


def test_differentials_land_in_support():
    cx = build_complex(Q3, "P1", "GWx", support(Q3, "T,T-1,T+1"))
    rng = random.Random(0)
    for _ in range(30):
        x = random_supported_unit(cx, rng)
        cx.encode(cx.differential(x))  # raises if a value is outside the component


def test_h0_examples():
    cx = build_complex(Q3, "P1", "GWx", support(Q3, "T"))
    FF = cx.function_field
    assert h0(cx, WittClass.square(FF, FF.make(2)))["in_h0"]
    r = h0(cx, WittClass.square(FF, FF.T()))
    # over Q3(T) the class <T> is ramified at 0 and infinity
    assert not r["in_h0"] and set(r["ramified_at"]) == {"(T)", "inf"}
    P = WittClass.square(FF, FF.T())
    x = 1 + (P - 1) * lift_constant(FF, WittClass.square(Q3, 2))
    assert not h0(cx, x)["in_h0"]


def test_h1_examples():
    real = h1_p1(R, seed=1)
    assert real["cardinality"] == 2 and real["stabilized"] and real["matches"] == ["A+W_tor"]
    padic = h1_p1(Q3, seed=1)
    assert padic["cardinality"] == 16 and padic["readings"]["A+W_tor"] == 16
    assert h1_p1(Q3, "NQ", seed=1)["cardinality"] == 8
    assert h1_p1(F5, seed=1)["cardinality"] == 4


def test_h1_rejects_rationals():
    with pytest.raises(UnsupportedError):
        h1_p1(Rationals())


@pytest.mark.parametrize("k", [Q3, F5], ids=str)
def test_h1_stabilizes(k):
    r = h1_p1(k, max_support=4, samples=10, seed=2)
    sizes = [h["cardinality"] for h in r["history"]]
    assert len(sizes) == 4 and len(set(sizes[1:])) == 1 and r["stabilized"]


def test_h1_consistency_q3():
    r = h1_consistency(Q3)
    assert (r["direct"], r["pic2"], r["nq"]) == (16, 2, 8) and r["consistent"] and r["pic2_injects"]


def test_line_bundles():
    assert line_bundle_class(-3).mod2 == 1 and line_bundle_class(4).mod2 == 0
    assert line_bundle_h1_image(R, -1)["nontrivial"]
    assert not line_bundle_h1_image(R, -2)["nontrivial"]


def test_sphere_cohomology_examples():
    s = sphere_cohomology(Q3, 1, 1)
    assert s["order"] == 16 and s["structure"] == "Z/2 + Z/2 + Z/4"
    assert sphere_cohomology(R, 1, 1)["order"] == 2
    assert sphere_cohomology(Q3, 2, 2, 1)["order"] == 1
    assert sphere_cohomology(Q3, 1, 0)["order"] == 16
    assert sphere_cohomology(F5, 1, 2)["order"] == 4


@pytest.mark.parametrize("k", [Q3, PadicField(5), F5, R], ids=str)
def test_sphere_matches_h1(k):
    assert sphere_cohomology(k, 1, 1)["order"] == h1_p1(k, samples=5, seed=3)["cardinality"]


def test_orientation():
    assert orientation_character(2, R).exponent == 3
    assert is_orientable_ST(3, R)[0]
    assert not is_orientable_ST(2, R)[0]
    assert is_orientable_ST(2, F5)[0]
    assert is_orientable_ST(2, Q3)[0]
    ok, tag = is_orientable_ST(2, SquareClosed())
    assert ok and "square-closed" in tag
    with pytest.raises(UnsupportedError):
        is_orientable_ST(2, Rationals())


def test_diagram_checks():
    r = exact_diagram_check(Q3, support(Q3, "T,T-1,inf"), samples=10, seed=4)
    assert r["ok"], r["failures"][:3]
    r = exact_diagram_check(R, support(R, "T,inf"), samples=10, seed=4)
    assert r["ok"] and r["checks"]["row1_(T)"]
    r = exact_diagram_check(Q3, support(Q3, "inf"), samples=5, seed=4)
    assert r["ok"] and r["checks"]["row_constants"]
    with pytest.raises(UnsupportedError):
        exact_diagram_check(Rationals(), support(Rationals(), "T"))
