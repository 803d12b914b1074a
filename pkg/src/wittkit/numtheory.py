"""Elementary number theory on rationals: valuations, Legendre and Hilbert symbols."""

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from sympy import factorint

from .errors import DomainError

INF = "inf"


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


@lru_cache(maxsize=1 << 16)
def prime_factors(n: int) -> tuple:
    """Sorted distinct prime divisors of |n|."""
    n = abs(n)
    if n < 2:
        return ()
    return tuple(sorted(factorint(n)))


@lru_cache(maxsize=1 << 16)
def _squarefree_int(n: int) -> int:
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def squarefree_part(x) -> int:
    """The squarefree integer in the rational square class of x."""
    x = as_fraction(x)
    if x == 0:
        raise DomainError("zero has no square class")
    return _squarefree_int(x.numerator * x.denominator)


def valuation(p: int, x) -> int:
    x = as_fraction(x)
    if x == 0:
        raise DomainError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def split_unit(p: int, x) -> tuple:
    """Return (v, u) with x = p^v * u and u a p-adic unit."""
    x = as_fraction(x)
    v = valuation(p, x)
    return v, x / Fraction(p) ** v


def residue_mod(p: int, u) -> int:
    """Reduction of a p-adic unit rational u modulo p."""
    u = as_fraction(u)
    return u.numerator * pow(u.denominator, -1, p) % p


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DomainError("Legendre symbol of a multiple of p")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    n = 2
    while legendre(n, p) == 1:
        n += 1
    return n


def is_rational_square(x) -> bool:
    x = as_fraction(x)
    if x <= 0:
        return False
    n, d = x.numerator, x.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _mod8(u: Fraction) -> int:
    # odd squares are 1 mod 8, so num*den has the class of num/den
    return u.numerator * u.denominator % 8


def is_local_square(place, x) -> bool:
    """Is the nonzero rational x a square in Q_p (or R when place is INF)?"""
    x = as_fraction(x)
    if x == 0:
        raise DomainError("zero")
    if place == INF:
        return x > 0
    v, u = split_unit(place, x)
    if v % 2:
        return False
    if place == 2:
        return _mod8(u) == 1
    return legendre(residue_mod(place, u), place) == 1


def hilbert_symbol(place, a, b) -> int:
    """Hilbert symbol (a, b) at a prime or at INF."""
    a, b = as_fraction(a), as_fraction(b)
    if a.denominator == 1 and b.denominator == 1:
        return _hilbert_int(place, a.numerator, b.numerator)
    return _hilbert(place, a, b)


@lru_cache(maxsize=1 << 18)
def _hilbert_int(place, a: int, b: int) -> int:
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol of zero")
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = place
    al = be = 0
    while a % p == 0:
        a //= p
        al += 1
    while b % p == 0:
        b //= p
        be += 1
    if p != 2:
        s = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
        if be % 2:
            s *= legendre(a, p)
        if al % 2:
            s *= legendre(b, p)
        return s
    u8, v8 = a % 8, b % 8
    e = ((u8 - 1) // 2) * ((v8 - 1) // 2) + al * ((v8 * v8 - 1) // 8) + be * ((u8 * u8 - 1) // 8)
    return -1 if e % 2 else 1


def _hilbert(place, a: Fraction, b: Fraction) -> int:
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol of zero")
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = place
    al, u = split_unit(p, a)
    be, v = split_unit(p, b)
    if p != 2:
        e = (al * be * ((p - 1) // 2)) % 2
        s = -1 if e else 1
        if be % 2:
            s *= legendre(residue_mod(p, u), p)
        if al % 2:
            s *= legendre(residue_mod(p, v), p)
        return s
    u8, v8 = _mod8(u), _mod8(v)
    eps = lambda t: ((t - 1) // 2) % 2
    omega = lambda t: ((t * t - 1) // 8) % 2
    e = eps(u8) * eps(v8) + al * omega(v8) + be * omega(u8)
    return -1 if e % 2 else 1


def relevant_primes(*xs) -> tuple:
    """2 together with every prime dividing a numerator or denominator of the xs."""
    ps = {2}
    for x in xs:
        x = as_fraction(x)
        ps.update(prime_factors(x.numerator))
        ps.update(prime_factors(x.denominator))
    return tuple(sorted(ps))
