"""Bezout forms of pointed rational self-maps of P^1 and the clutching class of a G_m-family."""

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .arith_fields import (
    Field, FiniteField, FunctionField, PadicField, RealClosed, Rationals, check_irreducible,
)
from .errors import DomainError, UnsupportedError
from .polynomials import Poly, RatFunc, RationalFunctionField
from .residue_theory import ValuationSpec, contraction_classify, lift_constant, second_residue, specialization
from .witt_rings import GWClass, WittClass, is_torsion

_T = sympy.Symbol("T")


def coefficient_field(F: Field):
    """The field the polynomial coefficients live in: k itself, or k(T) as reduced fractions."""
    return RationalFunctionField(F.base) if isinstance(F, FunctionField) else F


def to_coefficient(F: Field, a):
    """Coerce a field element (factored on k(T)) into the coefficient field."""
    if not isinstance(F, FunctionField):
        return F.coerce(a)
    R = coefficient_field(F)
    if isinstance(a, RatFunc):
        return a
    a = F.coerce(a)
    out = R.coerce(a.const)
    for f, e in a.factors:
        out = R.mul(out, _rpow(R, R.coerce(f), e))
    return out


def _rpow(R, p, e):
    out = R.one
    for _ in range(abs(e)):
        out = R.mul(out, p)
    return out if e > 0 else R.inv(out)


def _sympy_factor(base: Field, f: Poly) -> tuple:
    """(leading constant, {monic irreducible Poly: exponent}) of a polynomial over the base."""
    if f.degree < 1:
        return f.lc, {}
    if isinstance(base, FiniteField):
        if base.k != 1:
            raise UnsupportedError("factorization over non-prime finite fields is not implemented")
        expr = sum(int(c) * _T ** i for i, c in enumerate(f.coeffs))
        lc, facs = sympy.factor_list(expr, _T, modulus=base.p)
    else:
        expr = sum(sympy.Rational(c.numerator, c.denominator) * _T ** i
                   for i, c in enumerate(Fraction(c) for c in f.coeffs))
        lc, facs = sympy.factor_list(expr, _T)
    exps = {}
    for g, e in facs:
        cs = [base.coerce(int(c) % base.p) if isinstance(base, FiniteField) else Fraction(str(c))
              for c in reversed(sympy.Poly(g, _T).all_coeffs())]
        p = Poly(base, cs)
        if p.degree > 1 and check_irreducible(base, p) is False:
            raise UnsupportedError(f"{p.fmt('T')} splits over {base} but not over the prime field")
        exps[p.monic()] = exps.get(p.monic(), 0) + e
    return f.lc, exps


def from_coefficient(F: Field, r):
    """Convert a coefficient back to a field element (factoring on k(T))."""
    if not isinstance(F, FunctionField):
        return r
    c1, e1 = _sympy_factor(F.base, r.num)
    c2, e2 = _sympy_factor(F.base, r.den)
    exps = dict(e1)
    for p, e in e2.items():
        exps[p] = exps.get(p, 0) - e
    return F.make(F.base.div(c1, c2), exps)


@dataclass(frozen=True)
class RationalMapP1:
    """A pointed rational map A/B with deg A > deg B and A, B coprime."""

    field: Field
    A: Poly
    B: Poly

    def __post_init__(self):
        if self.A.degree <= self.B.degree:
            raise DomainError("need deg A > deg B")
        if self.B.is_zero():
            raise DomainError("zero denominator")
        if self.A.gcd(self.B).degree > 0:
            raise DomainError("A and B have a common factor")

    @property
    def degree(self) -> int:
        return self.A.degree

    def fmt(self) -> str:
        return f"{self.A.fmt('X')} / {self.B.fmt('X')}"


def rational_map(F: Field, text: str) -> RationalMapP1:
    from .parsing import parse_polys_ratio
    R = coefficient_field(F)
    symbol = None
    if isinstance(F, FunctionField):
        symbol = lambda s: R.T() if s == "T" else R.coerce(F.base.parse_element(s))
    A, B = parse_polys_ratio(text, R, "X", symbol)
    return RationalMapP1(F, A, B)


def bezout_matrix(f: RationalMapP1) -> list:
    """Coefficients b_ij of (A(X)B(Y) - A(Y)B(X))/(X - Y) = sum b_ij X^i Y^j."""
    R = f.A.field
    n = f.degree
    a = list(f.A.coeffs) + [R.zero] * (n + 1 - len(f.A.coeffs))
    b = list(f.B.coeffs) + [R.zero] * (n + 1 - len(f.B.coeffs))
    M = [[R.zero] * n for _ in range(n)]
    for p in range(n + 1):
        for q in range(p):
            c = R.sub(R.mul(a[p], b[q]), R.mul(a[q], b[p]))
            if R.is_zero(c):
                continue
            # (X^p Y^q - X^q Y^p)/(X - Y) = sum_{t < p-q} X^(q+t) Y^(p-1-t)
            for t in range(p - q):
                i, j = q + t, p - 1 - t
                M[i][j] = R.add(M[i][j], c)
    return M


def diagonalize(M: list, R) -> list:
    """Diagonal entries of a symmetric matrix congruent to M (exact symmetric elimination)."""
    M = [row[:] for row in M]
    n = len(M)
    diag = []
    for i in range(n):
        if R.is_zero(M[i][i]):
            j = next((j for j in range(i + 1, n) if not R.is_zero(M[j][j])), None)
            if j is not None:
                M[i], M[j] = M[j], M[i]
                for row in M:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if not R.is_zero(M[i][j])), None)
                if j is None:
                    raise DomainError("degenerate Bezout matrix")
                # replace e_i by e_i + e_j: the new diagonal entry is 2 M_ij
                for k in range(n):
                    M[i][k] = R.add(M[i][k], M[j][k])
                for k in range(n):
                    M[k][i] = R.add(M[k][i], M[k][j])
        p = M[i][i]
        if R.is_zero(p):
            raise DomainError("degenerate Bezout matrix")
        diag.append(p)
        for j in range(i + 1, n):
            if R.is_zero(M[j][i]):
                continue
            c = R.div(M[j][i], p)
            for k in range(i, n):
                M[j][k] = R.sub(M[j][k], R.mul(c, M[i][k]))
            for k in range(i, n):
                M[k][j] = R.sub(M[k][j], R.mul(c, M[k][i]))
    return diag


@dataclass(frozen=True)
class BezoutResult:
    matrix: list
    diagonal: tuple
    gw_class: GWClass


def bezout_form(f: RationalMapP1) -> BezoutResult:
    R = f.A.field
    M = bezout_matrix(f)
    n = len(M)
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise DomainError("Bezout matrix is not symmetric")
    diag = diagonalize(M, R)
    entries = tuple(from_coefficient(f.field, d) for d in diag)
    return BezoutResult(M, entries, GWClass(WittClass(f.field, entries), n))


def family_from_form(F: Field, a1, a2, a3) -> RationalMapP1:
    """(X^3 - (a3/a2 + a2/a1) X) / (a1 X^2 - a1 a3/a2), whose Bezout class is <a1, a2, a3>."""
    R = coefficient_field(F)
    a1, a2, a3 = (to_coefficient(F, a) for a in (a1, a2, a3))
    if any(R.is_zero(a) for a in (a1, a2, a3)):
        raise DomainError("entries must be nonzero")
    c1 = R.add(R.div(a3, a2), R.div(a2, a1))
    c0 = R.div(R.mul(a1, a3), a2)
    A = Poly(R, [R.zero, R.neg(c1), R.zero, R.one])
    B = Poly(R, [R.neg(c0), R.zero, a1])
    return RationalMapP1(F, A, B)


def t_family(k: Field, u) -> RationalMapP1:
    """The G_m-family (X^3 - (T + u) X) / (X^2 - T) over k(T)."""
    FF = FunctionField(k)
    u = k.coerce(u)
    return family_from_form(FF, FF.one, FF.make(u), FF.mul(FF.make(u), FF.T()))


@dataclass(frozen=True)
class ClutchingClass:
    g1: WittClass
    b: WittClass
    s_present: bool
    component: tuple
    trivial: bool

    def to_dict(self) -> dict:
        return {"g(1)": str(self.g1), "b": str(self.b), "S_present": self.s_present,
                "component": [self.component[0], str(self.component[1])], "trivial": self.trivial}


def clutching_class(g) -> ClutchingClass:
    """Class in H^1(P^1, GW^x) of the family g = g(1) + (<T> - 1) b with b torsion."""
    w = g.witt if isinstance(g, GWClass) else g
    FF = w.field
    if not isinstance(FF, FunctionField):
        raise DomainError("families live over k(T)")
    k = FF.base
    v0 = ValuationSpec.at(FF, Poly.x(k))
    v1 = ValuationSpec.at(FF, Poly.linear(k, k.one))
    try:
        g1 = specialization(v1, w)
    except DomainError as exc:
        raise UnsupportedError("unsupported normalization: family ramified at T = 1") from exc
    b = second_residue(v0, w)
    P = WittClass.square(FF, FF.T())
    if w != lift_constant(FF, g1) + (P - 1) * lift_constant(FF, b):
        raise UnsupportedError("unsupported normalization: family is not g(1) + (<T> - 1) b")
    if not is_torsion(b):
        raise UnsupportedError("unsupported normalization: b is not torsion")
    c = contraction_classify(v0, 1 + (P - 1) * lift_constant(FF, b))
    comp = (c.a_component, c.torsion_component.value)
    S = {WittClass.zero(k)} | ({WittClass.one(k)} if c.s_present else set())
    return ClutchingClass(g1, b, c.s_present, comp, comp[0] == 0 and comp[1] in S)


def clutching_combine(x: ClutchingClass, y: ClutchingClass) -> WittClass:
    from .witt_rings import boxplus
    return boxplus(1, x.b, y.b).value
