"""Base fields, their elements, square classes, orderings and symbols.

Supported fields::

    >>> from wittkit.arith_fields import parse_field
    >>> F = parse_field("Qp(3)")
    >>> [F.fmt(c) for c in F.square_classes()]
    ['1', '2', '3', '6']
    >>> parse_field("F(5)(T)")
    FunctionField(base=FiniteField(q=5))

Elements of Q, R and Q_p are ``Fraction`` objects (a p-adic number is given by a
rational representative).  Elements of F_q are integers encoding base-p digit
vectors.  Elements of k(T) are :class:`FactoredElement` values ``c * prod(pi^e)``.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm

from sympy import divisors, factorint, isprime

from .errors import DomainError, ParseError, UnsupportedError
from .numtheory import (
    INF, hilbert_symbol, is_local_square, is_rational_square, least_nonresidue,
    legendre, split_unit, squarefree_part, _mod8,
)
from .polynomials import (
    Poly, finite_field_irreducible, padic_has_root, sample_points, separate_roots,
)

__all__ = [
    "INF", "Field", "Rationals", "RealClosed", "FiniteField", "PadicField",
    "SquareClosed", "FunctionField", "FactoredElement", "parse_field",
    "hilbert_symbol", "is_square", "is_sum_of_squares", "square_classes",
    "orderings", "check_irreducible",
]


class Field:
    """Common interface.  Subclasses are frozen dataclasses, hence hashable."""

    is_real = False
    is_function_field = False
    has_finite_witt_ring = False

    # arithmetic -----------------------------------------------------------
    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse_element(x)
        return Fraction(x)

    def from_int(self, n: int):
        """The image of the integer n under Z -> F."""
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if self.is_zero(a):
            raise DomainError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, e: int):
        if e < 0:
            return self.power(self.inv(a), -e)
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def is_zero(self, a) -> bool:
        return a == 0

    def fmt(self, a) -> str:
        return str(a)

    def parse_element(self, s: str):
        s = s.strip()
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse element {s!r} of {self}") from exc

    def _nonzero(self, a):
        if self.is_zero(a):
            raise DomainError("zero is not allowed here")

    # square classes --------------------------------------------------------
    def is_square(self, a) -> bool:
        raise NotImplementedError

    def square_class(self, a):
        """Canonical representative of the square class of a."""
        raise NotImplementedError

    def square_classes(self):
        """List of canonical representatives, or None when there are infinitely many."""
        return None

    def is_sum_of_squares(self, a) -> bool:
        self._nonzero(a)
        return True

    def orderings(self) -> list:
        return []

    def __str__(self):
        return self.descriptor()


@dataclass(frozen=True)
class Rationals(Field):
    is_real = True

    def descriptor(self):
        return "Q"

    def is_square(self, a):
        self._nonzero(a)
        return is_rational_square(a)

    def square_class(self, a):
        self._nonzero(a)
        return Fraction(squarefree_part(a))

    def is_sum_of_squares(self, a):
        self._nonzero(a)
        return a > 0

    def orderings(self):
        return ["archimedean"]


@dataclass(frozen=True)
class RealClosed(Field):
    is_real = True

    def descriptor(self):
        return "R"

    def parse_element(self, s):
        if s.strip() == "u":
            return Fraction(-1)
        return super().parse_element(s)

    def is_square(self, a):
        self._nonzero(a)
        return a > 0

    def square_class(self, a):
        self._nonzero(a)
        return Fraction(1 if a > 0 else -1)

    def square_classes(self):
        return [Fraction(1), Fraction(-1)]

    def is_sum_of_squares(self, a):
        self._nonzero(a)
        return a > 0

    def orderings(self):
        return ["archimedean"]

    @property
    def nonresidue(self):
        return Fraction(-1)


@dataclass(frozen=True)
class PadicField(Field):
    p: int
    has_finite_witt_ring = True

    def __post_init__(self):
        if not isprime(self.p):
            raise DomainError(f"{self.p} is not a prime")

    def descriptor(self):
        return f"Qp({self.p})"

    @property
    def nonresidue(self):
        """A unit whose reduction is not a square (5 when p = 2)."""
        return Fraction(5 if self.p == 2 else least_nonresidue(self.p))

    @property
    def uniformizer(self):
        return Fraction(self.p)

    def parse_element(self, s):
        t = s.strip()
        if t == "u":
            return self.nonresidue
        if t == "p":
            return self.uniformizer
        return super().parse_element(s)

    def is_square(self, a):
        self._nonzero(a)
        return is_local_square(self.p, a)

    def square_class(self, a):
        self._nonzero(a)
        v, u = split_unit(self.p, a)
        if self.p == 2:
            return Fraction(2 ** (v % 2) * _mod8(u))
        r = u.numerator * pow(u.denominator, -1, self.p) % self.p
        unit = 1 if legendre(r, self.p) == 1 else int(self.nonresidue)
        return Fraction(self.p ** (v % 2) * unit)

    def square_classes(self):
        if self.p == 2:
            return [Fraction(x) for x in (1, 3, 5, 7, 2, 6, 10, 14)]
        u = int(self.nonresidue)
        return [Fraction(x) for x in (1, u, self.p, u * self.p)]

    def hilbert(self, a, b) -> int:
        return hilbert_symbol(self.p, a, b)


@lru_cache(maxsize=None)
def _prime_power(q: int) -> tuple:
    fac = factorint(q)
    if len(fac) != 1:
        raise DomainError(f"{q} is not a prime power")
    return next(iter(fac.items()))


@lru_cache(maxsize=None)
def _default_modulus(p: int, k: int) -> tuple:
    Fp = FiniteField(p)
    for n in range(p ** k):
        digits = [(n // p ** i) % p for i in range(k)]
        f = Poly(Fp, digits + [1])
        if finite_field_irreducible(f, p):
            return tuple(digits + [1])
    raise DomainError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def _gf_tables(p: int, modulus: tuple):
    """exp/log tables of F_p[x]/(modulus) for element encodings sum c_i p^i."""
    k = len(modulus) - 1
    q = p ** k

    def encode(cs):
        return sum(c * p ** i for i, c in enumerate(cs))

    def mul_x(cs):
        top = cs[-1]
        out = [0] + cs[:-1]
        return [(o - top * m) % p for o, m in zip(out, modulus[:-1])]

    # find a primitive element by trying generators g = encoded n
    Fp = FiniteField(p)
    mod_poly = Poly(Fp, modulus)
    for n in range(2, q):
        g = Poly(Fp, [(n // p ** i) % p for i in range(k)])
        exp = []
        cur = Poly(Fp, [1])
        seen = set()
        ok = True
        for _ in range(q - 1):
            cs = list(cur.coeffs) + [0] * (k - len(cur.coeffs))
            e = encode(cs)
            if e in seen:
                ok = False
                break
            seen.add(e)
            exp.append(e)
            cur = (cur * g) % mod_poly
        if ok:
            log = {e: i for i, e in enumerate(exp)}
            return exp, log
    raise DomainError("no primitive element")


@dataclass(frozen=True)
class FiniteField(Field):
    q: int
    modulus: tuple = field(default=None, compare=True)
    has_finite_witt_ring = True

    def __post_init__(self):
        p, k = _prime_power(self.q)
        if p == 2:
            raise DomainError("characteristic 2 is not supported")
        if k > 1 and self.modulus is None:
            object.__setattr__(self, "modulus", _default_modulus(p, k))

    @property
    def p(self) -> int:
        return _prime_power(self.q)[0]

    @property
    def k(self) -> int:
        return _prime_power(self.q)[1]

    def descriptor(self):
        if self.k > 1 and self.modulus != _default_modulus(self.p, self.k):
            return f"F({self.q})[{Poly(FiniteField(self.p), self.modulus).fmt('g')}]"
        return f"F({self.q})"

    def __repr__(self):
        if self.k == 1 or self.modulus == _default_modulus(self.p, self.k):
            return f"FiniteField(q={self.q})"
        return f"FiniteField(q={self.q}, modulus={self.modulus})"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def _tables(self):
        return _gf_tables(self.p, tuple(self.modulus))

    def coerce(self, x):
        if isinstance(x, str):
            return self.parse_element(x)
        if isinstance(x, Fraction):
            return self.div(self.from_int(x.numerator), self.from_int(x.denominator))
        if self.k == 1:
            return int(x) % self.q
        if not 0 <= x < self.q:
            raise DomainError(f"{x} is not an element encoding of {self}")
        return int(x)

    def from_int(self, n):
        return n % self.p

    def _digits(self, a):
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _encode(self, ds):
        return sum(d * self.p ** i for i, d in enumerate(ds))

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.q
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.q
        return self._encode([(-x) % self.p for x in self._digits(a)])

    def mul(self, a, b):
        if self.k == 1:
            return a * b % self.q
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables()
        return exp[(log[a] + log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise DomainError("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.q)
        exp, log = self._tables()
        return exp[(-log[a]) % (self.q - 1)]

    def power(self, a, e):
        if self.k == 1:
            if e < 0:
                a, e = self.inv(a), -e
            return pow(a, e, self.q)
        return super().power(a, e)

    def is_zero(self, a):
        return a == 0

    def fmt(self, a):
        if self.k == 1:
            return str(a)
        return Poly(FiniteField(self.p), self._digits(a)).fmt("g")

    def parse_element(self, s):
        t = s.strip()
        if t in ("u", "s"):
            return self.nonresidue
        if t == "g" and self.k > 1:
            return self.p
        try:
            return self.coerce(Fraction(t))
        except (ValueError, ZeroDivisionError, DomainError) as exc:
            raise ParseError(f"cannot parse element {s!r} of {self}") from exc

    def is_square(self, a):
        self._nonzero(a)
        return self.power(a, (self.q - 1) // 2) == 1

    @property
    def nonresidue(self):
        """The least nonresidue in the encoding order."""
        for a in range(2, self.q):
            if not self.is_square(a):
                return a
        raise DomainError("no nonresidue")

    def square_class(self, a):
        return 1 if self.is_square(a) else self.nonresidue

    def square_classes(self):
        return [1, self.nonresidue]

    def elements(self):
        return range(1, self.q)


@dataclass(frozen=True)
class SquareClosed(Field):
    """A stand-in for a field in which every element is a square (e.g. C)."""

    has_finite_witt_ring = True

    def descriptor(self):
        return "C"

    def is_square(self, a):
        self._nonzero(a)
        return True

    def square_class(self, a):
        self._nonzero(a)
        return Fraction(1)

    def square_classes(self):
        return [Fraction(1)]


# ------------------------------------------------------------------ k(T)

@dataclass(frozen=True)
class FactoredElement:
    """The element const * prod(pi**e) of k(T); pis monic irreducible, sorted, e != 0."""

    const: object
    factors: tuple = ()

    def exponent(self, pi) -> int:
        for f, e in self.factors:
            if f == pi:
                return e
        return 0

    @property
    def support(self):
        return tuple(f for f, _ in self.factors)

    @property
    def degree(self) -> int:
        return sum(e * f.degree for f, e in self.factors)


def _make_factored(const, exps: dict) -> FactoredElement:
    items = sorted(((f, e) for f, e in exps.items() if e != 0), key=lambda t: t[0].sort_key())
    return FactoredElement(const, tuple(items))


def check_irreducible(base: Field, f: Poly):
    """True/False when decidable, None when irreducibility is only asserted (degree > 3)."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    if isinstance(base, FiniteField):
        if base.k == 1:
            return finite_field_irreducible(f, base.q)
        if n > 3:
            return None
        return all(not base.is_zero(f(x)) for x in range(base.q))
    if isinstance(base, SquareClosed):
        return False
    if isinstance(base, RealClosed):
        if n == 2:
            a, b, c = (Fraction(x) for x in (f.coeffs[2], f.coeffs[1], f.coeffs[0]))
            return b * b - 4 * a * c < 0
        return False
    if n > 3:
        return None
    if isinstance(base, PadicField):
        return not padic_has_root(f, base.p)
    if isinstance(base, Rationals):
        return not rational_roots(f)
    return None


def rational_roots(f: Poly) -> list:
    """Rational roots of a polynomial with rational coefficients (rational root test)."""
    cs = [Fraction(c) for c in f.coeffs]
    den = lcm(*[c.denominator for c in cs])
    ints = [int(c * den) for c in cs]
    roots = []
    if ints and ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints = ints[1:]
    if len(ints) < 2:
        return roots
    for a in divisors(abs(ints[0])):
        for b in divisors(abs(ints[-1])):
            for r in (Fraction(a, b), Fraction(-a, b)):
                if r not in roots and sum(c * r ** i for i, c in enumerate(ints)) == 0:
                    roots.append(r)
    return sorted(roots)


@dataclass(frozen=True)
class FunctionField(Field):
    base: Field
    is_function_field = True

    def __post_init__(self):
        if isinstance(self.base, FunctionField):
            raise DomainError("only one level of function field is supported")

    def descriptor(self):
        return f"{self.base.descriptor()}(T)"

    @property
    def is_real(self):
        return self.base.is_real

    @property
    def zero(self):
        raise UnsupportedError("factored elements have no zero")

    @property
    def one(self):
        return FactoredElement(self.base.one)

    def make(self, const, exps=None) -> FactoredElement:
        const = self.base.coerce(const)
        if self.base.is_zero(const):
            raise DomainError("zero is not a factored element")
        return _make_factored(const, dict(exps or {}))

    def T(self) -> FactoredElement:
        return self.make(self.base.one, {Poly.x(self.base): 1})

    def poly(self, coeffs) -> Poly:
        return Poly(self.base, [self.base.coerce(c) for c in coeffs])

    def linear(self, root) -> Poly:
        return Poly.linear(self.base, self.base.coerce(root))

    def from_int(self, n: int):
        return self.make(self.base.from_int(n))

    def from_poly(self, f: Poly, e: int = 1) -> FactoredElement:
        """Element f**e for f asserted irreducible (constants allowed)."""
        if f.is_zero():
            raise DomainError("zero polynomial")
        if f.degree == 0:
            return self.make(self.base.power(f.lc, e))
        return self.make(self.base.power(f.lc, e), {f.monic(): e})

    def coerce(self, x):
        if isinstance(x, FactoredElement):
            return x
        if isinstance(x, Poly):
            return self.from_poly(x)
        if isinstance(x, str):
            return self.parse_element(x)
        return self.make(self.base.coerce(x))

    def mul(self, a, b):
        exps = dict(a.factors)
        for f, e in b.factors:
            exps[f] = exps.get(f, 0) + e
        return _make_factored(self.base.mul(a.const, b.const), exps)

    def inv(self, a):
        return FactoredElement(self.base.inv(a.const), tuple((f, -e) for f, e in a.factors))

    def neg(self, a):
        return FactoredElement(self.base.neg(a.const), a.factors)

    def power(self, a, e):
        return _make_factored(self.base.power(a.const, e), {f: k * e for f, k in a.factors})

    def add(self, a, b):
        raise UnsupportedError("addition of factored elements is not supported")

    sub = add

    def is_zero(self, a):
        return False

    def fmt(self, a) -> str:
        c = self.base.fmt(a.const)
        if not a.factors:
            return c
        parts = []
        for f, e in a.factors:
            s = "T" if f.coeffs == (self.base.zero, self.base.one) else f"({f.fmt('T')})"
            parts.append(s if e == 1 else f"{s}^{e}")
        body = "*".join(parts)
        if c == "1":
            return body
        if c == "-1":
            return "-" + body
        if " " in c or "+" in c:
            c = f"({c})"
        return f"{c}*{body}"

    def parse_element(self, s):
        from .parsing import parse_factored
        return parse_factored(self, s)

    def is_square(self, a):
        return all(e % 2 == 0 for _, e in a.factors) and self.base.is_square(a.const)

    def square_class(self, a):
        return _make_factored(self.base.square_class(a.const), {f: 1 for f, e in a.factors if e % 2})

    def is_sum_of_squares(self, a):
        if not self.base.is_real:
            return True
        polys = [f for f, _ in a.factors]
        roots = separate_roots(polys)
        for t in sample_points(roots):
            if self.real_sign(a, t) < 0:
                return False
        return True

    def real_sign(self, a, t) -> int:
        """Sign of a at the rational point t (t must not be a root of any factor)."""
        s = 1 if a.const > 0 else -1
        for f, e in a.factors:
            v = f(Fraction(t))
            if v == 0:
                raise DomainError("evaluation at a root")
            if v < 0 and e % 2:
                s = -s
        return s

    def orderings(self):
        return ["real-points"] if self.base.is_real else []

    # places ----------------------------------------------------------------
    def valuation(self, a, place) -> int:
        if place == INF:
            return -a.degree
        return a.exponent(place)

    def residue_field(self, place) -> Field:
        if place == INF or place.degree == 1:
            return self.base
        if isinstance(self.base, FiniteField) and self.base.k == 1:
            return FiniteField(self.base.q ** place.degree, tuple(place.coeffs))
        if isinstance(self.base, RealClosed) and place.degree == 2:
            return SquareClosed()
        raise UnsupportedError(f"residue field of {place.fmt()} over {self.base} is not supported")

    def reduce_unit(self, a, place):
        """Residue of the unit part of a at place, with the canonical uniformizer."""
        if place == INF:
            return a.const
        kappa = self.residue_field(place)
        if place.degree == 1:
            r = self.base.neg(place.coeffs[0])
            out = a.const
            for f, e in a.factors:
                if f != place:
                    out = self.base.mul(out, self.base.power(f(r), e))
            return out
        if isinstance(kappa, SquareClosed):
            return Fraction(1)
        out = kappa.coerce(a.const)
        for f, e in a.factors:
            if f != place:
                rem = f % place
                code = kappa._encode([int(c) for c in rem.coeffs] + [0] * (kappa.k - len(rem.coeffs)))
                out = kappa.mul(out, kappa.power(code, e))
        return out


# ------------------------------------------------------------------ module API

_FIELD_RE = re.compile(r"^(Q|R|C|F\((\d+)\)|Qp\((\d+)\))(\(T\))?$")


def parse_field(s: str) -> Field:
    t = s.replace(" ", "")
    m = _FIELD_RE.match(t)
    if not m:
        raise ParseError(f"unknown field descriptor {s!r}")
    head = m.group(1)
    try:
        if head == "Q":
            base = Rationals()
        elif head == "R":
            base = RealClosed()
        elif head == "C":
            base = SquareClosed()
        elif head.startswith("Qp"):
            base = PadicField(int(m.group(3)))
        else:
            base = FiniteField(int(m.group(2)))
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
    return FunctionField(base) if m.group(4) else base


def is_square(F: Field, a) -> bool:
    return F.is_square(F.coerce(a))


def is_sum_of_squares(F: Field, a) -> bool:
    return F.is_sum_of_squares(F.coerce(a))


def square_classes(F: Field):
    return F.square_classes()


def orderings(F: Field) -> list:
    return F.orderings()
