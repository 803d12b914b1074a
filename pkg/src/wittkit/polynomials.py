"""Dense univariate polynomials over a base field, real root isolation and p-adic root tests.

Coefficients are stored low degree first.  The base field object supplies
``add``, ``sub``, ``mul``, ``neg``, ``inv``, ``zero``, ``one`` and ``is_zero``.
"""

from fractions import Fraction
from math import lcm

from sympy import factorint

from .errors import DomainError, InternalError
from .numtheory import valuation


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @classmethod
    def x(cls, field):
        return cls(field, [field.zero, field.one])

    @classmethod
    def linear(cls, field, root):
        """The monic polynomial T - root."""
        return cls(field, [field.neg(root), field.one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def sort_key(self):
        return (self.degree, self.coeffs)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly(self.field, [self.field.coerce(other)])

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (F.zero,) * (n - len(self.coeffs))
        b = other.coeffs + (F.zero,) * (n - len(other.coeffs))
        return Poly(F, [F.add(x, y) for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(F, [])
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative polynomial power")
        out = Poly(self.field, [self.field.one])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c):
        return Poly(self.field, [self.field.mul(c, a) for a in self.coeffs])

    def __divmod__(self, other):
        F = self.field
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return Poly(F, []), self
        q = [F.zero] * (dq + 1)
        inv = F.inv(other.lc)
        m = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = F.mul(r[k + m - 1], inv)
            q[k] = c
            if F.is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                r[k + j] = F.sub(r[k + j], F.mul(c, b))
        return Poly(F, q), Poly(F, r[: m - 1])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __call__(self, x):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lc))

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lc == self.field.one

    def derivative(self):
        F = self.field
        return Poly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, e: int, mod):
        out = Poly(self.field, [self.field.one]) % mod
        base = self % mod
        while e:
            if e & 1:
                out = (out * base) % mod
            base = (base * base) % mod
            e >>= 1
        return out

    def fmt(self, var: str = "T") -> str:
        if self.is_zero():
            return "0"
        F = self.field
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if F.is_zero(c):
                continue
            cs = F.fmt(c)
            neg = False
            if cs.startswith("-"):
                alt = F.fmt(F.neg(c))
                if not alt.startswith("-"):
                    neg, cs = True, alt
            if "+" in cs or ("-" in cs) or " " in cs:
                cs = f"({cs})"
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and cs == "1":
                term = mono
            elif mono:
                term = f"{cs}*{mono}"
            else:
                term = cs
            parts.append(("-" if neg else "+", term))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s

    def __repr__(self):
        return f"Poly({self.fmt()})"


# ---------------------------------------------------------------- real roots

def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(f: Poly) -> list:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        seq.append(-r)
    return seq[:-1]


def _variations(seq, x) -> int:
    signs = []
    for g in seq:
        if x is None:
            s = 0
        elif x == "+inf":
            s = _sign(g.lc)
        elif x == "-inf":
            s = _sign(g.lc) * (-1 if g.degree % 2 else 1)
        else:
            s = _sign(g(x))
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def squarefree_part(f: Poly) -> Poly:
    g = f.gcd(f.derivative())
    return (f // g).monic() if g.degree > 0 else f.monic()


def isolate_real_roots(f: Poly) -> list:
    """Disjoint isolating intervals (lo, hi) for the distinct real roots of f.

    Each interval contains exactly one root; lo == hi marks an exact rational root.
    Coefficients must be rationals.
    """
    f = squarefree_part(Poly(f.field, [Fraction(c) for c in f.coeffs]))
    if f.degree < 1:
        return []
    if f.degree == 1:
        r = -f.coeffs[0] / f.coeffs[1]
        return [(r, r)]
    seq = sturm_sequence(f)
    bound = 1 + max(abs(Fraction(c) / f.lc) for c in f.coeffs[:-1])
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = _variations(seq, lo) - _variations(seq, hi)  # roots in (lo, hi]
        if n == 0:
            continue
        if n == 1:
            if f(hi) == 0:
                out.append((hi, hi))
            else:
                out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return out


def refine_root(f: Poly, lo, hi):
    """Halve an isolating interval of the squarefree polynomial f."""
    if lo == hi:
        return lo, hi
    mid = (lo + hi) / 2
    fm = f(mid)
    if fm == 0:
        return mid, mid
    if _sign(f(lo)) * _sign(fm) < 0:
        return lo, mid
    return mid, hi


def separate_roots(polys) -> list:
    """Isolate the real roots of several coprime polynomials into pairwise disjoint intervals.

    Returns sorted triples (lo, hi, index of the polynomial).
    """
    items = []
    sqf = []
    for i, f in enumerate(polys):
        g = squarefree_part(Poly(f.field, [Fraction(c) for c in f.coeffs]))
        sqf.append(g)
        items.extend([lo, hi, i] for lo, hi in isolate_real_roots(g))
    for _ in range(10_000):
        items.sort(key=lambda t: (t[0], t[1]))
        clash = False
        for a, b in zip(items, items[1:]):
            if b[0] <= a[1] and not (a[0] == a[1] == b[0] == b[1] and a[2] == b[2]):
                clash = True
                for it in (a, b):
                    it[0], it[1] = refine_root(sqf[it[2]], it[0], it[1])
        if not clash:
            return [tuple(t) for t in items]
    raise InternalError("real roots could not be separated")


def sample_points(intervals) -> list:
    """One rational point in each open interval cut out by sorted disjoint root intervals."""
    if not intervals:
        return [Fraction(0)]
    pts = [intervals[0][0] - 1]
    for a, b in zip(intervals, intervals[1:]):
        pts.append((a[1] + b[0]) / 2)
    pts.append(intervals[-1][1] + 1)
    return pts


# ---------------------------------------------------------------- p-adic roots

def _integer_coeffs(f: Poly) -> list:
    cs = [Fraction(c) for c in f.coeffs]
    m = lcm(*[c.denominator for c in cs])
    return [int(c * m) for c in cs]


def _eval_int(cs, x: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _zp_root(cs, p: int, depth: int = 64, start_level: int = 1, only_multiples_of_p: bool = False) -> bool:
    """Does the squarefree integer polynomial cs have a root in Z_p (or in pZ_p)?"""
    d = [i * c for i, c in enumerate(cs)][1:]
    cands = [r for r in range(p) if (not only_multiples_of_p or r == 0)]
    cands = [r for r in cands if _eval_int(cs, r) % p == 0]
    level = 1
    while cands and level <= depth:
        nxt = []
        for r in cands:
            fr = _eval_int(cs, r)
            if fr == 0:
                return True
            dr = _eval_int(d, r)
            if dr != 0 and valuation(p, fr) > 2 * valuation(p, dr):
                return True
            for t in range(p):
                s = r + t * p ** level
                if _eval_int(cs, s) % p ** (level + 1) == 0:
                    nxt.append(s)
        cands = nxt
        level += 1
    if cands:
        raise InternalError("p-adic root search did not terminate")
    return False


def padic_has_root(f: Poly, p: int) -> bool:
    """Does the rational polynomial f have a root in Q_p?  Uses Hensel's lemma."""
    f = squarefree_part(Poly(f.field, [Fraction(c) for c in f.coeffs]))
    if f.degree < 1:
        return False
    if f.degree == 1:
        return True
    cs = _integer_coeffs(f)
    if cs[0] == 0:
        return True
    if _zp_root(cs, p):
        return True
    rev = list(reversed(cs))
    return _zp_root(rev, p, only_multiples_of_p=True)


# ---------------------------------------------------------------- finite fields

def finite_field_irreducible(f: Poly, q: int) -> bool:
    """Rabin's irreducibility test over F_q."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    X = Poly.x(f.field)

    def frob(g, times):
        for _ in range(times):
            g = g.powmod(q, f)
        return g

    if (frob(X, n) - X) % f != Poly(f.field, []):
        return False
    for r in factorint(n):
        h = frob(X, n // r) - X
        if h.gcd(f).degree > 0:
            return False
    return True


# ---------------------------------------------------------------- k(T) in expanded form

class RatFunc:
    """A reduced quotient num/den of polynomials over a base field, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None):
        if den is None:
            den = Poly(num.field, [num.field.one])
        if den.is_zero():
            raise DomainError("zero denominator")
        g = num.gcd(den) if not num.is_zero() else den.monic()
        num, den = num // g, den // g
        c = den.lc
        self.num = num.scale(num.field.inv(c))
        self.den = den.monic()

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num.fmt()} / {self.den.fmt()})"


class RationalFunctionField:
    """Field operations on :class:`RatFunc` values, used as a coefficient field for Poly."""

    def __init__(self, base):
        self.base = base

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and self.base == other.base

    def __hash__(self):
        return hash(("ratfunc", self.base))

    @property
    def zero(self):
        return RatFunc(Poly(self.base, []))

    @property
    def one(self):
        return RatFunc(Poly(self.base, [self.base.one]))

    def T(self):
        return RatFunc(Poly.x(self.base))

    def from_int(self, n: int):
        return RatFunc(Poly(self.base, [self.base.from_int(n)]))

    def coerce(self, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return RatFunc(x)
        return RatFunc(Poly(self.base, [self.base.coerce(x)]))

    def add(self, a, b):
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)

    def neg(self, a):
        return RatFunc(-a.num, a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return RatFunc(a.num * b.num, a.den * b.den)

    def inv(self, a):
        if a.num.is_zero():
            raise DomainError("inverse of zero")
        return RatFunc(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a.num.is_zero()

    def fmt(self, a):
        if a.den.degree == 0:
            return a.num.fmt("T")
        return f"({a.num.fmt('T')})/({a.den.fmt('T')})"
