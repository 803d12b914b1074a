"""Diagonal quadratic forms: invariants, isotropy and anisotropic kernels.

Hasse invariants use the product convention eps(q) = prod_{i<j} (a_i, a_j)_v.
With it the quaternion norm form <1,-a,-b,ab> with (a,b) = -1 has d = 1 and
eps = -(-1,-1), so no correction factor is needed.

Witt classes over Q_p are classified by (dim mod 2, d, eps) after adding or
removing hyperbolic planes until the dimension is 8 or 9; over Q by the
signature together with that local data at every prime (Hasse-Minkowski).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from .arith_fields import (
    INF, Field, FiniteField, FunctionField, PadicField, Rationals, RealClosed,
    SquareClosed,
)
from .errors import DomainError, FieldMismatchError, InternalError, UnsupportedError
from .numtheory import (
    hilbert_symbol, is_local_square, is_rational_square, prime_factors,
    relevant_primes, squarefree_part,
)
from .polynomials import sample_points, separate_roots


@dataclass(frozen=True)
class DiagonalForm:
    field: Field
    entries: tuple = ()

    def __post_init__(self):
        F = self.field
        es = tuple(F.coerce(a) for a in self.entries)
        for a in es:
            if F.is_zero(a):
                raise DomainError("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", es)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def det(self):
        d = self.field.one
        for a in self.entries:
            d = self.field.mul(d, a)
        return d

    def __str__(self):
        return "<" + ", ".join(self.field.fmt(a) for a in self.entries) + f"> over {self.field}"


def hyperbolic(F: Field, copies: int = 1) -> DiagonalForm:
    one = F.one
    return DiagonalForm(F, [one, F.neg(one)] * copies)


def _same_field(q1, q2):
    if q1.field != q2.field:
        raise FieldMismatchError(f"{q1.field} vs {q2.field}")


def direct_sum(q1: DiagonalForm, q2: DiagonalForm) -> DiagonalForm:
    _same_field(q1, q2)
    return DiagonalForm(q1.field, q1.entries + q2.entries)


def tensor(q1: DiagonalForm, q2: DiagonalForm) -> DiagonalForm:
    _same_field(q1, q2)
    F = q1.field
    return DiagonalForm(F, [F.mul(a, b) for a in q1.entries for b in q2.entries])


# ------------------------------------------------------------------ local data

def hasse_and_det(place, entries) -> tuple:
    """(eps, det) at a place; eps = prod_{i<j} (a_i, a_j)."""
    eps, d = 1, Fraction(1)
    for a in entries:
        eps *= hilbert_symbol(place, d, a)
        d *= a
    return eps, d


def shift_dimension(place, n: int, d, eps: int, target: int) -> tuple:
    """(d, eps) after adding or removing hyperbolic planes to reach dimension target."""
    if (n - target) % 2:
        raise DomainError("dimension parity mismatch")
    while n < target:
        eps *= hilbert_symbol(place, d, -1)
        d = -d
        n += 2
    while n > target:
        d = -d
        eps *= hilbert_symbol(place, d, -1)
        n -= 2
    return d, eps


def _normal_dim(n: int) -> int:
    return 8 if n % 2 == 0 else 9


def local_isotropic(place, n: int, d, eps: int) -> bool:
    """Isotropy over Q_p of a form with dimension n, determinant d and Hasse invariant eps."""
    if n <= 1:
        return False
    if n == 2:
        return is_local_square(place, -d)
    if n == 3:
        return eps == hilbert_symbol(place, -1, -d)
    if n == 4:
        return not is_local_square(place, d) or eps == hilbert_symbol(place, -1, -1)
    return True


def local_realizable(place, m: int, d, eps: int) -> bool:
    """Does a form over Q_p with dimension m, determinant d and invariant eps exist?"""
    if m == 0:
        return is_local_square(place, d) and eps == 1
    if m == 1:
        return eps == 1
    if m == 2:
        return eps == 1 or not is_local_square(place, -d)
    return True


def _padic_key(p: int, entries) -> tuple:
    F = PadicField(p)
    n = len(entries)
    eps, d = hasse_and_det(p, entries)
    dN, eN = shift_dimension(p, n, d, eps, _normal_dim(n))
    return (n % 2, F.square_class(dN), eN)


@lru_cache(maxsize=1 << 16)
def _padic_key_cached(p: int, reps: tuple) -> tuple:
    return _padic_key(p, reps)


@lru_cache(maxsize=None)
def _padic_table(p: int) -> dict:
    reps = PadicField(p).square_classes()
    table = {}
    for m in range(5):
        for combo in combinations_with_replacement(reps, m):
            key = _padic_key(p, combo)
            if key in table:
                continue
            eps, d = hasse_and_det(p, combo)
            if m <= 1 or not local_isotropic(p, m, d, eps):
                table[key] = combo
    expected = 32 if p == 2 else 16
    if len(table) != expected:
        raise InternalError(f"W(Q_{p}) table has {len(table)} classes")
    return table


# ------------------------------------------------------------------ Q

def _signature(entries) -> int:
    return sum(1 if a > 0 else -1 for a in entries)


def rational_key(entries) -> tuple:
    """Complete invariant of the Witt class over Q: (signature, parity, d_N, primes with eps_N = -1)."""
    n = len(entries)
    N = _normal_dim(n)
    d = Fraction(1)
    for a in entries:
        d *= a
    dN = squarefree_part(d * (-1 if (N - n) // 2 % 2 else 1))
    bad = []
    for p in relevant_primes(*entries):
        eps, dp = hasse_and_det(p, entries)
        if shift_dimension(p, n, dp, eps, N)[1] == -1:
            bad.append(p)
    return (_signature(entries), n % 2, dN, frozenset(bad))


def _real_eps(m: int, sigma: int) -> int:
    r = (m - sigma) // 2
    return -1 if (r * (r - 1) // 2) % 2 else 1


def _realizable(m: int, d: int, eps: dict, sigma: int) -> bool:
    if abs(sigma) > m or (m - sigma) % 2:
        return False
    r = (m - sigma) // 2
    if (d < 0) != (r % 2 == 1):
        return False
    if eps.get(INF, 1) != _real_eps(m, sigma):
        return False
    if m == 0:
        return d == 1 and all(e == 1 for e in eps.values())
    for p, e in eps.items():
        if p == INF or e == 1:
            continue
        if m == 1:
            return False
        if m == 2 and is_local_square(p, -d):
            return False
    return True


def _candidates(d: int, sign_req: int, binary: bool):
    """Squarefree integers by size; for the last split, divisors of d come first."""
    divs = [1]
    for p in prime_factors(d) if binary else ():
        divs += [x * p for x in divs]
    pool = sorted((s * x for x in divs for s in (1, -1)), key=lambda a: (max(abs(a), abs(d // a)), abs(a), a < 0))
    seen = set()
    for a in pool:
        if sign_req == 0 or (a > 0) == (sign_req > 0):
            seen.add(a)
            yield a
    for k in range(1, 10 ** 6):
        for a in (k, -k):
            if a in seen or squarefree_part(a) != a:
                continue
            if sign_req == 0 or (a > 0) == (sign_req > 0):
                yield a
    raise InternalError("no diagonal entry found")


def _build(m: int, d: int, eps: dict, sigma: int) -> list:
    if m == 0:
        return []
    if m == 1:
        return [d]
    sign_req = 1 if sigma == m else (-1 if sigma == -m else 0)
    places = sorted({p for p in eps if p != INF} | set(prime_factors(d)) | {2})
    if m == 2:
        return _build_binary(d, eps, sign_req, places)
    for a in _candidates(d, sign_req, m == 2):
        d2 = squarefree_part(Fraction(d * a))
        s2 = sigma - (1 if a > 0 else -1)
        eps2 = {}
        for v in set(eps) | set(places) | set(prime_factors(a)) | {INF}:
            e = eps.get(v, 1) * hilbert_symbol(v, a, -d)
            if e != 1 or v == INF:
                eps2[v] = e
        if _realizable(m - 1, d2, eps2, s2):
            return [a] + _build(m - 1, d2, eps2, s2)
    raise InternalError("kernel reconstruction failed")


def _build_binary(d: int, eps: dict, sign_req: int, places: list) -> list:
    # <a, ad>: need (a, -d)_v = eps_v everywhere, with early exit per candidate
    for a in _candidates(d, sign_req, True):
        ok = True
        for v in places + [p for p in prime_factors(a) if p not in places] + [INF]:
            if hilbert_symbol(v, a, -d) != eps.get(v, 1):
                ok = False
                break
        if ok:
            return [a, squarefree_part(Fraction(a * d))]
    raise InternalError("kernel reconstruction failed")


@lru_cache(maxsize=1 << 14)
def rational_kernel(key: tuple) -> tuple:
    """The canonical anisotropic representative of the Witt class over Q with the given key."""
    sigma, e, dN, bad = key
    N = _normal_dim(e)
    places = sorted({2} | set(prime_factors(dN)) | set(bad))

    def local(p, m):
        return shift_dimension(p, N, Fraction(dN), -1 if p in bad else 1, m)

    m = max(abs(sigma), e)
    if e == 0 and dN != 1:
        m = max(m, 2)
    for p in places:
        mp = e
        while not local_realizable(p, mp, *local(p, mp)):
            mp += 2
        m = max(m, mp)
    d_m = squarefree_part(Fraction(dN) * (-1 if (N - m) // 2 % 2 else 1))
    eps = {INF: _real_eps(m, sigma)}
    for p in places:
        ep = local(p, m)[1]
        if ep != 1:
            eps[p] = ep
    return tuple(Fraction(a) for a in _build(m, d_m, eps, sigma))


# ------------------------------------------------------------------ invariants

@dataclass(frozen=True)
class FormInvariants:
    dim: int
    det: object
    signed_disc: object
    hasse: dict = field(default_factory=dict)
    signature: dict = field(default_factory=dict)


def _check_base(q: DiagonalForm):
    if isinstance(q.field, FunctionField):
        raise UnsupportedError("invariants over k(T) are read through residues")


def invariants(q: DiagonalForm) -> FormInvariants:
    _check_base(q)
    F, n = q.field, q.dim
    d = q.det
    sd = F.mul(d, F.from_int((-1) ** (n * (n - 1) // 2)))
    hasse, sig = {}, {}
    if isinstance(F, Rationals):
        for p in relevant_primes(*q.entries):
            hasse[p] = hasse_and_det(p, q.entries)[0]
        hasse[INF] = hasse_and_det(INF, q.entries)[0]
        sig[INF] = _signature(q.entries)
    elif isinstance(F, RealClosed):
        hasse[INF] = hasse_and_det(INF, q.entries)[0]
        sig[INF] = _signature(q.entries)
    elif isinstance(F, PadicField):
        hasse[F.p] = hasse_and_det(F.p, q.entries)[0]
    return FormInvariants(n, F.square_class(d), F.square_class(sd), hasse, sig)


def is_isotropic(q: DiagonalForm) -> bool:
    _check_base(q)
    F, n = q.field, q.dim
    if n <= 1:
        return False
    if isinstance(F, SquareClosed):
        return True
    if isinstance(F, RealClosed):
        return any(a > 0 for a in q.entries) and any(a < 0 for a in q.entries)
    if isinstance(F, FiniteField):
        return n >= 3 or F.is_square(F.neg(q.det))
    if isinstance(F, PadicField):
        eps, d = hasse_and_det(F.p, q.entries)
        return local_isotropic(F.p, n, d, eps)
    if isinstance(F, Rationals):
        if n == 2:
            return is_rational_square(-q.det)
        if not (any(a > 0 for a in q.entries) and any(a < 0 for a in q.entries)):
            return False
        if n >= 5:
            return True
        for p in relevant_primes(*q.entries):
            eps, d = hasse_and_det(p, q.entries)
            if not local_isotropic(p, n, d, eps):
                return False
        return True
    raise UnsupportedError(f"isotropy over {F}")


def witt_key(F: Field, entries) -> tuple:
    """A complete, hashable invariant of the Witt class of <entries> over a base field."""
    n = len(entries)
    if isinstance(F, Rationals):
        return rational_key(entries)
    if isinstance(F, RealClosed):
        return (_signature(entries),)
    if isinstance(F, PadicField):
        return _padic_key_cached(F.p, tuple(sorted(F.square_class(a) for a in entries)))
    if isinstance(F, SquareClosed):
        return (n % 2,)
    if isinstance(F, FiniteField):
        d = F.one
        for a in entries:
            d = F.mul(d, a)
        e = n % 2
        d0 = F.mul(d, F.from_int((-1 if (n - e) // 2 % 2 else 1)))
        return (e, F.square_class(d0))
    raise UnsupportedError(f"Witt classes over {F}")


def kernel_from_key(F: Field, key: tuple) -> tuple:
    if isinstance(F, Rationals):
        return rational_kernel(key)
    if isinstance(F, RealClosed):
        s = key[0]
        return (Fraction(1 if s > 0 else -1),) * abs(s)
    if isinstance(F, PadicField):
        return _padic_table(F.p)[key]
    if isinstance(F, SquareClosed):
        return (Fraction(1),) * key[0]
    if isinstance(F, FiniteField):
        e, d0 = key
        if e == 1:
            return (d0,)
        return () if d0 == 1 else (F.one, F.neg(d0))
    raise UnsupportedError(f"Witt classes over {F}")


def witt_decompose(q: DiagonalForm) -> tuple:
    """(anisotropic kernel, Witt index) with q = kernel + index * H."""
    _check_base(q)
    kernel = kernel_from_key(q.field, witt_key(q.field, q.entries))
    return DiagonalForm(q.field, kernel), (q.dim - len(kernel)) // 2


# ------------------------------------------------------------------ signatures over k(T)

@dataclass(frozen=True)
class SignatureFunction:
    """Piecewise constant signature: values[i] holds on the i-th interval between breakpoints.

    Breakpoints are isolating intervals (lo, hi) of the real roots, sorted.
    """

    breakpoints: tuple
    values: tuple

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


def signature_function(q: DiagonalForm) -> SignatureFunction:
    F = q.field
    if not isinstance(F, FunctionField):
        raise DomainError("signature functions live over k(T)")
    if not F.base.is_real:
        return SignatureFunction((), ())
    polys = sorted({f for a in q.entries for f, _ in a.factors}, key=lambda f: f.sort_key())
    roots = separate_roots(polys)
    values = tuple(sum(F.real_sign(a, t) for a in q.entries) for t in sample_points(roots))
    return SignatureFunction(tuple((lo, hi) for lo, hi, _ in roots), values)
