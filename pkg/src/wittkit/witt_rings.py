"""Witt rings W(F), Grothendieck-Witt rings GW(F) and the torsion groups W(F)_tor^(n).

A :class:`WittClass` stores a representative diagonal form and a canonical key.
Over base fields the key is a complete invariant and the representative is the
anisotropic kernel.  Over k(T) the key is the tuple of residues

    (first residue at infinity, second residue at each finite place)

which determines the class by Milnor's split exact sequence; the representative
is rebuilt from it as c + sum <pi> r_pi whenever every place has degree one.
"""

import threading
from functools import lru_cache
from collections import Counter
from fractions import Fraction

from .arith_fields import INF, Field, FunctionField, SquareClosed
from .errors import DomainError, FieldMismatchError, InternalError, UnsupportedError
from .quad_forms import DiagonalForm, kernel_from_key, signature_function, witt_key

TORSION_CAP = 25
INVERSE_ITERATIONS = 64


# ------------------------------------------------------------------ k(T) canonical data

def split_at_place(FF: FunctionField, place, entries) -> tuple:
    """Residue-field entries of the even and odd valuation parts (canonical uniformizer)."""
    first, second = [], []
    for a in entries:
        n = FF.valuation(a, place)
        u = FF.reduce_unit(a, place)
        (second if n % 2 else first).append(u)
    return first, second


def places_of(entries) -> list:
    ps = {f for a in entries for f, _ in a.factors}
    return sorted(ps, key=lambda f: f.sort_key())


def _reduce_raw(FF: FunctionField, entries) -> tuple:
    reps = [FF.square_class(a) for a in entries]
    count = Counter(reps)
    for a in list(count):
        b = FF.square_class(FF.neg(a))
        if a == b:
            k = count[a] // 2
            count[a] -= 2 * k
        elif b in count:
            k = min(count[a], count[b])
            count[a] -= k
            count[b] -= k
    out = []
    for a in sorted(count, key=lambda x: FF.fmt(x)):
        out.extend([a] * count[a])
    return tuple(out)


def _function_field_canonical(FF: FunctionField, entries) -> tuple:
    base = FF.base
    first_inf, _ = split_at_place(FF, INF, entries)
    inf_key = witt_key(base, first_inf)
    residues = []
    liftable = True
    for pi in places_of(entries):
        kappa = FF.residue_field(pi)
        _, second = split_at_place(FF, pi, entries)
        k = witt_key(kappa, second)
        if k == witt_key(kappa, ()):
            continue
        residues.append((pi, k))
        if pi.degree > 1 and not isinstance(kappa, SquareClosed):
            liftable = False
    key = (inf_key, tuple(residues))
    if not liftable:
        return key, _reduce_raw(FF, entries)
    const = list(kernel_from_key(base, inf_key))
    rep = []
    for pi, k in residues:
        kappa = FF.residue_field(pi)
        lifted = kernel_from_key(kappa, k)
        if isinstance(kappa, SquareClosed):
            lifted = (base.one,) * len(lifted)
        if pi.degree % 2 == 0:
            const += [base.neg(r) for r in lifted]
        rep += [FF.mul(FF.make(r), FF.make(base.one, {pi: 1})) for r in lifted]
    const = kernel_from_key(base, witt_key(base, const))
    rep = [FF.make(c) for c in const] + rep
    return key, tuple(rep)


def canonicalize(F: Field, entries) -> tuple:
    """(key, representative entries) for the Witt class of <entries>."""
    if isinstance(F, FunctionField):
        try:
            return _function_field_canonical(F, entries)
        except UnsupportedError:
            return None, _reduce_raw(F, entries)
    return _base_canonical(F, tuple(entries))


@lru_cache(maxsize=1 << 16)
def _base_canonical(F: Field, entries: tuple) -> tuple:
    key = witt_key(F, entries)
    return key, tuple(kernel_from_key(F, key))


# ------------------------------------------------------------------ Witt classes

class WittClass:
    __slots__ = ("field", "rep", "_key")

    def __init__(self, field: Field, entries=(), *, canonical: bool = False, key=None):
        self.field = field
        if canonical:
            self.rep, self._key = tuple(entries), key
        else:
            es = [field.coerce(a) for a in entries]
            for a in es:
                if field.is_zero(a):
                    raise DomainError("diagonal entries must be nonzero")
            self._key, self.rep = canonicalize(field, es)

    @classmethod
    def _raw(cls, field: Field, entries) -> "WittClass":
        """Entries already coerced and nonzero."""
        key, rep = canonicalize(field, entries)
        return cls(field, rep, canonical=True, key=key)

    @classmethod
    def of(cls, q: DiagonalForm) -> "WittClass":
        return cls(q.field, q.entries)

    @classmethod
    def zero(cls, F: Field) -> "WittClass":
        return cls(F, ())

    @classmethod
    def one(cls, F: Field) -> "WittClass":
        return cls(F, (F.one,))

    @classmethod
    def square(cls, F: Field, a) -> "WittClass":
        """The class <a>."""
        return cls(F, (F.coerce(a),))

    @property
    def key(self):
        if self._key is None:
            raise UnsupportedError(f"equality of Witt classes over {self.field} needs residues at unsupported places")
        return self._key

    @property
    def form(self) -> DiagonalForm:
        return DiagonalForm(self.field, self.rep)

    @property
    def dim(self) -> int:
        return len(self.rep)

    def _check(self, other):
        if not isinstance(other, WittClass):
            raise TypeError("expected a WittClass")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, WittClass) or other.field != self.field:
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash((self.field, self.key))

    def is_zero(self) -> bool:
        return self.key == WittClass.zero(self.field).key

    def __add__(self, other):
        if isinstance(other, int):
            other = other * WittClass.one(self.field)
        self._check(other)
        return WittClass._raw(self.field, self.rep + other.rep)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return WittClass._raw(F, [F.neg(a) for a in self.rep])

    def __sub__(self, other):
        if isinstance(other, int):
            other = other * WittClass.one(self.field)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._times(other)
        self._check(other)
        F = self.field
        return WittClass._raw(F, [F.mul(a, b) for a in self.rep for b in other.rep])

    def __rmul__(self, other):
        if isinstance(other, int):
            return self._times(other)
        return NotImplemented

    def _times(self, n: int):
        if n < 0:
            return (-self)._times(-n)
        out = WittClass.zero(self.field)
        base = self
        while n:
            if n & 1:
                out = out + base
            base = base + base
            n >>= 1
        return out

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative powers need unit_inverse")
        out = WittClass.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __str__(self):
        return "[" + ", ".join(self.field.fmt(a) for a in self.rep) + "]"

    def __repr__(self):
        return f"WittClass({self} over {self.field})"


def witt_class(q: DiagonalForm) -> WittClass:
    return WittClass.of(q)


def witt_add(x: WittClass, y: WittClass) -> WittClass:
    return x + y


def witt_mul(x: WittClass, y: WittClass) -> WittClass:
    return x * y


def witt_neg(x: WittClass) -> WittClass:
    return -x


def in_fundamental_ideal(x: WittClass) -> bool:
    return x.dim % 2 == 0


def is_torsion(x: WittClass) -> bool:
    F = x.field
    if not F.is_real:
        return True
    if isinstance(F, FunctionField):
        return signature_function(x.form).is_zero()
    return x.key[0] == 0


def torsion_order(x: WittClass):
    """Additive order of a torsion class (a power of 2), or None for nontorsion classes."""
    if not is_torsion(x):
        return None
    y, order = x, 1
    for _ in range(TORSION_CAP + 1):
        if y.is_zero():
            return order
        y, order = y + y, 2 * order
    raise InternalError("torsion order exceeds 2^25")


def is_nilpotent(x: WittClass) -> bool:
    return x.is_zero() or (in_fundamental_ideal(x) and is_torsion(x))


# ------------------------------------------------------------------ W_tor^(n)

class TorsionLevelElement:
    """An element of W(F)_tor^(n): a torsion class with the group law a + b + (-2)^n ab."""

    __slots__ = ("level", "value")

    def __init__(self, level: int, value: WittClass, *, check: bool = True):
        if level < 0:
            raise DomainError("levels are nonnegative")
        if check and not is_torsion(value):
            raise DomainError("W_tor^(n) elements must be torsion")
        self.level = level
        self.value = value

    @property
    def field(self):
        return self.value.field

    def __eq__(self, other):
        return (isinstance(other, TorsionLevelElement) and self.level == other.level
                and self.value == other.value)

    def __hash__(self):
        return hash((self.level, self.value))

    def __repr__(self):
        return f"TorsionLevelElement({self.level}, {self.value})"


def _level_args(n, a, b=None):
    vals = []
    for t in (a, b):
        if t is None:
            continue
        if isinstance(t, TorsionLevelElement):
            if t.level != n:
                raise DomainError(f"level mismatch: {t.level} vs {n}")
            vals.append(t.value)
        else:
            if not is_torsion(t):
                raise DomainError("W_tor^(n) elements must be torsion")
            vals.append(t)
    return vals


def boxplus(n: int, a, b) -> TorsionLevelElement:
    x, y = _level_args(n, a, b)
    return TorsionLevelElement(n, x + y + ((-2) ** n) * (x * y), check=False)


def boxplus_inverse(n: int, a) -> TorsionLevelElement:
    """-sum_{i>=1} (-1)^((i-1)(n-1)) 2^(n(i-1)) a^i, stopped once the next summand vanishes."""
    (x,) = _level_args(n, a)
    total = WittClass.zero(x.field)
    power = x
    for i in range(1, INVERSE_ITERATIONS + 1):
        term = (2 ** (n * (i - 1))) * power
        if ((i - 1) * (n - 1)) % 2:
            term = -term
        if term.is_zero():
            return TorsionLevelElement(n, -total, check=False)
        total = total + term
        power = power * x
    raise InternalError("boxplus inverse series did not terminate")


def level_zero(F: Field, n: int) -> TorsionLevelElement:
    return TorsionLevelElement(n, WittClass.zero(F), check=False)


# ------------------------------------------------------------------ GW

class GWClass:
    """An element of GW(F) stored as (Witt class, rank) with rank = dim mod 2."""

    __slots__ = ("witt", "rank")

    def __init__(self, witt: WittClass, rank: int):
        if (rank - witt.dim) % 2:
            raise DomainError("rank and Witt class have different parities")
        self.witt = witt
        self.rank = rank

    @property
    def field(self):
        return self.witt.field

    @classmethod
    def of(cls, q: DiagonalForm) -> "GWClass":
        return cls(WittClass.of(q), q.dim)

    @classmethod
    def one(cls, F):
        return cls(WittClass.one(F), 1)

    @classmethod
    def zero(cls, F):
        return cls(WittClass.zero(F), 0)

    @classmethod
    def square(cls, F, a):
        return cls(WittClass.square(F, a), 1)

    def __eq__(self, other):
        if not isinstance(other, GWClass):
            return NotImplemented
        return self.rank == other.rank and self.witt == other.witt

    def __hash__(self):
        return hash((self.rank, self.witt))

    def __add__(self, other):
        return GWClass(self.witt + other.witt, self.rank + other.rank)

    def __neg__(self):
        return GWClass(-self.witt, -self.rank)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GWClass(self.witt * other, self.rank * other)
        return GWClass(self.witt * other.witt, self.rank * other.rank)

    __rmul__ = __mul__

    def __repr__(self):
        return f"GWClass({self.witt}, rank={self.rank})"


def gw_class(q: DiagonalForm) -> GWClass:
    return GWClass.of(q)


def gw_add(x: GWClass, y: GWClass) -> GWClass:
    return x + y


def gw_mul(x: GWClass, y: GWClass) -> GWClass:
    return x * y


def gw_eq(x: GWClass, y: GWClass) -> bool:
    return x == y


# ------------------------------------------------------------------ finite Witt rings

_TABLE_LOCK = threading.Lock()
_ELEMENTS = {}


def witt_ring_elements(F: Field) -> list:
    """All elements of a finite Witt ring, by additive closure of the classes <c>."""
    if not F.has_finite_witt_ring:
        raise UnsupportedError(f"W({F}) is infinite")
    with _TABLE_LOCK:
        if F in _ELEMENTS:
            return _ELEMENTS[F]
    gens = [WittClass.square(F, c) for c in F.square_classes()]
    seen = {WittClass.zero(F)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elements = sorted(seen, key=lambda x: (x.dim, [F.fmt(a) for a in x.rep]))
    with _TABLE_LOCK:
        _ELEMENTS.setdefault(F, elements)
        return _ELEMENTS[F]


def torsion_elements(F: Field) -> list:
    if F.is_real:
        if F.has_finite_witt_ring:
            return [x for x in witt_ring_elements(F) if is_torsion(x)]
        if F.descriptor() == "R":
            return [WittClass.zero(F)]
        raise UnsupportedError(f"W({F})_tor is infinite")
    return witt_ring_elements(F)


def witt_table(F: Field) -> dict:
    els = witt_ring_elements(F)
    index = {x: i for i, x in enumerate(els)}
    return {
        "field": str(F),
        "elements": [str(x) for x in els],
        "add": [[index[x + y] for y in els] for x in els],
        "mul": [[index[x * y] for y in els] for x in els],
    }
