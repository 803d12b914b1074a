"""Unit groups W(F)^x and GW(F)^x, the decomposition +-<u>(1+n), and NQ(F)."""

from dataclasses import dataclass

from .abelian import quotient_invariants, structure_string
from .errors import DomainError, InternalError, UnsupportedError
from .witt_rings import (
    GWClass, WittClass, is_nilpotent, is_torsion, witt_ring_elements,
)


def _witt(x) -> WittClass:
    return x.witt if isinstance(x, GWClass) else x


def is_unit(x) -> bool:
    """x is a unit iff x^2 - 1 is nilpotent (and, in GW, the rank is +-1)."""
    if isinstance(x, GWClass) and x.rank not in (1, -1):
        return False
    w = _witt(x)
    return is_nilpotent(w * w - 1)


def _require_unit(x):
    if not is_unit(x):
        raise DomainError("not a unit")


def unit_inverse(x):
    """x^{-1} = x (1 + m)^{-1} with m = x^2 - 1 nilpotent."""
    _require_unit(x)
    w = _witt(x)
    m = w * w - 1
    inv, term = WittClass.one(w.field), WittClass.one(w.field)
    for _ in range(64):
        term = -(term * m)
        if term.is_zero():
            break
        inv = inv + term
    else:
        raise InternalError("geometric series did not terminate")
    y = w * inv
    if isinstance(x, GWClass):
        return GWClass(y, x.rank)
    return y


@dataclass(frozen=True)
class UnitDecomposition:
    sign: int
    square_class: object
    nilpotent_part: WittClass

    def recompose(self) -> WittClass:
        F = self.nilpotent_part.field
        return self.sign * (WittClass.square(F, self.square_class) * (1 + self.nilpotent_part))


def signed_discriminant(x: WittClass):
    F = x.field
    n = x.dim
    d = F.one
    for a in x.rep:
        d = F.mul(d, a)
    return F.mul(d, F.from_int((-1) ** (n * (n - 1) // 2)))


def unit_decompose(x) -> UnitDecomposition:
    """Write a unit as sign * <u> * (1 + n) with n nilpotent.

    Over a field with one ordering the sign is the sign of the signature;
    otherwise it is +1.  The square class is that of sign * (signed discriminant),
    which always works because the signed discriminant of a unit has the sign
    of its signature at every ordering.
    """
    _require_unit(x)
    w = _witt(x)
    F = w.field
    sign = 1
    if F.is_real and not F.is_function_field:
        sign = 1 if w.key[0] > 0 else -1
    u = F.square_class(F.mul(F.from_int(sign), signed_discriminant(w)))
    n = sign * (WittClass.square(F, u) * w) - 1
    if not is_nilpotent(n):
        raise InternalError("decomposition failed")
    return UnitDecomposition(sign, u, n)


def represented_by_square_class(x):
    """Some u with x = <u>, or None."""
    _require_unit(x)
    w = _witt(x)
    if isinstance(x, GWClass) and x.rank != 1:
        return None
    F = w.field
    if not F.is_function_field:
        return F.square_class(w.rep[0]) if w.dim == 1 else None
    d = F.square_class(signed_discriminant(w))
    return d if w == WittClass.square(F, d) else None


def square_class_in_one_plus_nil(F, u) -> bool:
    return is_nilpotent(WittClass.square(F, u) - 1)


# ------------------------------------------------------------------ NQ

class NQClass:
    """The image of a unit in NQ(F) = W(F)^x / (square classes)."""

    __slots__ = ("field", "rep")

    def __init__(self, rep: WittClass):
        _require_unit(rep)
        self.field = rep.field
        self.rep = rep

    def __eq__(self, other):
        return isinstance(other, NQClass) and nq_eq(self, other)

    def __hash__(self):
        if self.field.has_finite_witt_ring:
            coset = {WittClass.square(self.field, c) * self.rep for c in self.field.square_classes()}
            return hash(frozenset(coset))
        return hash(self.field)

    def __repr__(self):
        return f"NQClass({self.rep})"


def nq_class(x) -> NQClass:
    return NQClass(_witt(x))


def nq_eq(a, b) -> bool:
    a = a.rep if isinstance(a, NQClass) else _witt(a)
    b = b.rep if isinstance(b, NQClass) else _witt(b)
    return represented_by_square_class(a * unit_inverse(b)) is not None


# ------------------------------------------------------------------ finite checks

def unit_group(F) -> list:
    if not F.has_finite_witt_ring and F.descriptor() == "R":
        return [WittClass.one(F), WittClass.square(F, -1)]
    return [x for x in witt_ring_elements(F) if is_unit(x)]


def verify_pushout_square(F) -> dict:
    """Check that W(F)^x is the pushout of square classes and 1 + I_tor over their intersection."""
    if not F.has_finite_witt_ring:
        raise UnsupportedError(f"W({F}) is infinite")
    W = witt_ring_elements(F)
    units = set(unit_group(F))
    squares = {WittClass.square(F, c) for c in F.square_classes()}
    one_plus = {1 + n for n in W if is_nilpotent(n)}
    inter = squares & one_plus
    generated = {a * b for a in squares for b in one_plus}
    sums_of_squares = {WittClass.square(F, c) for c in F.square_classes() if F.is_sum_of_squares(c)}
    key = lambda x: (x.dim, str(x))
    factors = quotient_invariants(units, squares, lambda a, b: a * b, WittClass.one(F), key)
    checks = {
        "square_classes_injective": len(squares) == len(F.square_classes()),
        "generated_by_both": generated == units,
        "amalgamation_count": len(units) * len(inter) == len(squares) * len(one_plus),
        "intersection_is_sums_of_squares": inter == sums_of_squares,
    }
    return {
        "field": str(F),
        "witt_ring": len(W),
        "units": len(units),
        "square_classes": len(squares),
        "one_plus_itor": len(one_plus),
        "intersection": len(inter),
        "quotient_order": len(units) // len(squares),
        "quotient": structure_string(factors),
        "checks": checks,
        "ok": all(checks.values()),
    }


def gw_unit_sequence(F) -> dict:
    """The sequence 1 -> Z/2 -> GW(F)^x -> W(F)^x -> 1 checked by enumeration."""
    units = unit_group(F)
    gw_units = [GWClass(w, r) for w in units for r in (1, -1)]
    one = WittClass.one(F)
    kernel = [g for g in gw_units if g.witt == one]
    image = {g.witt for g in gw_units}
    return {
        "gw_units": len(gw_units),
        "kernel": [f"{g.witt} rank {g.rank}" for g in kernel],
        "kernel_size": len(kernel),
        "surjective": image == set(units),
    }
