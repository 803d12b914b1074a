"""Valuations, residue maps, contraction classes and Milnor's sequence over k(T).

Locally at a valuation v with uniformizer pi, an element x of W(F) maps to
x0 + e * x1 in W(kappa)[e]/(e^2 - 1), e = <pi>, where x0 and x1 are the first
and second residues.  Every computation here reads off (x0, x1).
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .arith_fields import (
    INF, Field, FiniteField, FunctionField, PadicField, Rationals, check_irreducible,
)
from .errors import DomainError, ParseError, UnsupportedError
from .numtheory import residue_mod, split_unit
from .polynomials import Poly
from .quad_forms import DiagonalForm
from .unit_groups import is_unit, unit_inverse
from .witt_rings import (
    GWClass, TorsionLevelElement, WittClass, boxplus, is_nilpotent, is_torsion,
    places_of, torsion_elements,
)

MAX_LEVEL = 32


@dataclass(frozen=True)
class ValuationSpec:
    """A discrete valuation: p-adic on Q or Q_p, (pi) or infinity on k(T).

    ``twist`` replaces the canonical uniformizer by uniformizer * twist.
    """

    field: Field
    kind: str
    prime: int = None
    poly: Poly = None
    twist: object = None

    def __post_init__(self):
        F = self.field
        if self.kind == "padic":
            if not isinstance(F, (Rationals, PadicField)):
                raise DomainError("p-adic valuations live on Q or Q_p")
            if isinstance(F, PadicField) and F.p != self.prime:
                raise DomainError("prime mismatch")
            if self.prime == 2:
                raise DomainError("residue characteristic 2 is not supported")
        elif self.kind == "monic":
            if not isinstance(F, FunctionField):
                raise DomainError("monic places live on k(T)")
            f = self.poly
            if f.field != F.base or not f.is_monic() or f.degree < 1:
                raise DomainError("place must be a monic nonconstant polynomial over the base")
            if check_irreducible(F.base, f) is False:
                raise DomainError(f"{f.fmt()} is not irreducible over {F.base}")
        elif self.kind == "infinity":
            if not isinstance(F, FunctionField):
                raise DomainError("the place at infinity lives on k(T)")
        else:
            raise DomainError(f"unknown valuation kind {self.kind}")
        if self.twist is not None and self._split(self.twist)[0] != 0:
            raise DomainError("uniformizer twist must be a unit")

    # constructors
    @classmethod
    def padic(cls, p: int, field: Field = None, twist=None):
        return cls(field or Rationals(), "padic", prime=p, twist=twist)

    @classmethod
    def at(cls, FF: FunctionField, place, twist=None):
        if isinstance(place, str):
            return parse_place(FF, place, twist)
        if not isinstance(place, Poly):
            place = Poly.linear(FF.base, FF.base.coerce(place))
        return cls(FF, "monic", poly=place.monic(), twist=twist)

    @classmethod
    def infinity(cls, FF: FunctionField, twist=None):
        return cls(FF, "infinity", twist=twist)

    @property
    def place(self):
        return {"padic": self.prime, "monic": self.poly, "infinity": INF}[self.kind]

    @property
    def label(self) -> str:
        if self.kind == "padic":
            return str(self.prime)
        if self.kind == "infinity":
            return "inf"
        return f"({self.poly.fmt('T')})"

    @property
    def irreducibility_asserted(self) -> bool:
        return self.kind == "monic" and check_irreducible(self.field.base, self.poly) is None

    @property
    def residue_field(self) -> Field:
        if self.kind == "padic":
            return FiniteField(self.prime)
        return self.field.residue_field(self.place)

    @property
    def uniformizer(self):
        F = self.field
        if self.kind == "padic":
            u = Fraction(self.prime)
        elif self.kind == "monic":
            u = F.make(F.base.one, {self.poly: 1})
        else:
            u = F.make(F.base.one, {Poly.x(F.base): -1})
        return u if self.twist is None else F.mul(u, F.coerce(self.twist))

    def _split(self, a):
        F = self.field
        if self.kind == "padic":
            n, u = split_unit(self.prime, a)
            return n, residue_mod(self.prime, u)
        if self.kind == "infinity":
            return F.valuation(a, INF), a.const
        return F.valuation(a, self.poly), F.reduce_unit(a, self.poly)

    def parts(self, a) -> tuple:
        """(v(a), residue of a / uniformizer^v(a))."""
        n, u = self._split(a)
        if self.twist is not None and n:
            kappa = self.residue_field
            w = self._split(self.field.coerce(self.twist))[1]
            u = kappa.mul(u, kappa.power(w, -n))
        return n, u

    def is_sum_of_squares_uniformizer(self) -> bool:
        return self.field.is_sum_of_squares(self.uniformizer)


def parse_place(FF: FunctionField, text: str, twist=None) -> ValuationSpec:
    from .parsing import eval_poly, parse_ast
    t = text.strip()
    if t in ("inf", "oo", "∞", "infinity"):
        return ValuationSpec.infinity(FF, twist)
    try:
        f = eval_poly(FF.base, "T", parse_ast(t))
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
    if f.degree < 1:
        raise ParseError(f"{text!r} is not a place")
    try:
        return ValuationSpec(FF, "monic", poly=f.monic(), twist=twist)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def parse_support(FF: FunctionField, text: str) -> list:
    from .parsing import split_top_level
    return [parse_place(FF, s) for s in split_top_level(text) if s.strip()]


# ------------------------------------------------------------------ residues

def _entries(x):
    if isinstance(x, GWClass):
        return x.witt.rep
    if isinstance(x, WittClass):
        return x.rep
    if isinstance(x, DiagonalForm):
        return x.entries
    return tuple(x)


def local_classes(v: ValuationSpec, x) -> tuple:
    """(first residue, second residue) in W(kappa)."""
    kappa = v.residue_field
    first, second = [], []
    for a in _entries(x):
        n, u = v.parts(a)
        (second if n % 2 else first).append(u)
    return WittClass(kappa, first), WittClass(kappa, second)


def second_residue(v: ValuationSpec, x) -> WittClass:
    return local_classes(v, x)[1]


def first_residue(v: ValuationSpec, x) -> WittClass:
    return local_classes(v, x)[0]


def is_unramified(v: ValuationSpec, x) -> bool:
    if isinstance(x, GWClass) or isinstance(x, WittClass):
        if is_unit(x):
            return second_residue(v, x).is_zero()
    return second_residue(v, x).is_zero()


def specialization(v: ValuationSpec, x):
    x0, x1 = local_classes(v, x)
    if not x1.is_zero():
        raise DomainError(f"class is ramified at {v.label}")
    if isinstance(x, GWClass):
        return GWClass(x0, x.rank)
    return x0


def torsion_level_residue(n: int, v: ValuationSpec, a) -> TorsionLevelElement:
    """Residue W(F)_tor^(n) -> W(kappa)_tor^(n+1).

    a is first written as u boxplus_n (<pi> - 1) b with u unramified; the result is b.
    Locally u = a0 + a1 and b = a1 * (1 + (-2)^n u)^{-1}.
    """
    if n > MAX_LEVEL:
        raise DomainError("level overflow")
    x = a.value if isinstance(a, TorsionLevelElement) else a
    if not is_torsion(x):
        raise DomainError("torsion input required")
    a0, a1 = local_classes(v, x)
    c = 1 + ((-2) ** n) * (a0 + a1)
    if not is_unit(c):
        raise DomainError("element has no normal form at this level")
    return TorsionLevelElement(n + 1, a1 * unit_inverse(c))


def unit_residue(v: ValuationSpec, x) -> TorsionLevelElement:
    """Residue 1 + I_tor -> W(kappa)_tor^(1) of a unit x = 1 + a."""
    w = x.witt if isinstance(x, GWClass) else x
    a = w - 1
    if not is_nilpotent(a):
        raise DomainError("input is not in 1 + I_tor")
    return torsion_level_residue(0, v, a)


@dataclass(frozen=True)
class ContractionClass:
    """The class of a unit in GW(F)^x / GW^x(O_v) = A + W(kappa)_tor^(1).

    ``a_present`` is True when the uniformizer is not a sum of squares (A = Z/2);
    otherwise ``s_present`` is True and the A-component is always 0.
    """

    valuation: ValuationSpec
    a_component: int
    torsion_component: TorsionLevelElement
    a_present: bool

    @property
    def s_present(self) -> bool:
        return not self.a_present

    def is_trivial(self) -> bool:
        return self.a_component == 0 and self.torsion_component.value.is_zero()

    def combine(self, other: "ContractionClass") -> "ContractionClass":
        return ContractionClass(
            self.valuation, self.a_component ^ other.a_component,
            boxplus(1, self.torsion_component, other.torsion_component), self.a_present,
        )

    def __eq__(self, other):
        return (isinstance(other, ContractionClass) and self.a_component == other.a_component
                and self.torsion_component == other.torsion_component)

    def __hash__(self):
        return hash((self.a_component, self.torsion_component))

    def to_dict(self) -> dict:
        return {
            "place": self.valuation.label,
            "A_present": self.a_present,
            "a": self.a_component,
            "torsion": str(self.torsion_component.value),
        }


def contraction_classify(v: ValuationSpec, x) -> ContractionClass:
    """Write x = <pi>^e (1 + (<pi> - 1) b) modulo unramified units and return (e, b)."""
    if not is_unit(x):
        raise DomainError("contraction classes are defined for units")
    x0, x1 = local_classes(v, x)
    c = x0 + x1
    beta = x1 * unit_inverse(c)
    a_present = not v.is_sum_of_squares_uniformizer()
    if a_present and not is_torsion(beta):
        b = 1 - beta
        if not is_torsion(b):
            raise UnsupportedError("residue field with several orderings")
        return ContractionClass(v, 1, TorsionLevelElement(1, b), True)
    return ContractionClass(v, 0, TorsionLevelElement(1, beta), a_present)


def contraction_witness(v: ValuationSpec, a_component: int, b: WittClass) -> GWClass:
    """The unit <pi>^e (1 + (<pi> - 1) b~) realizing a contraction class (degree-1 places)."""
    F = v.field
    pi = WittClass.square(F, v.uniformizer)
    bt = lift_constant(F, b)
    w = 1 + (pi - 1) * bt
    if a_component:
        w = pi * w
    return GWClass(w, 1)


# ------------------------------------------------------------------ Milnor sequence

def lift_constant(FF: FunctionField, w: WittClass) -> WittClass:
    """A class of W(k) read in W(k(T))."""
    if w.field == FF:
        return w
    if w.field != FF.base:
        raise DomainError("constants must come from the base field")
    return WittClass(FF, [FF.make(a) for a in w.rep])


def milnor_total_residue(x) -> dict:
    """Nonzero second residues at the finite places in the support of x (keyed by place label)."""
    entries = _entries(x)
    FF = x.field
    out = {}
    for pi in places_of(entries):
        r = second_residue(ValuationSpec(FF, "monic", poly=pi), entries)
        if not r.is_zero():
            out[pi] = r
    return out


def infinity_residue(x) -> WittClass:
    """The second residue at infinity, which lies outside Milnor's sequence."""
    return second_residue(ValuationSpec.infinity(x.field), _entries(x))


def milnor_lift(FF: FunctionField, targets: dict) -> WittClass:
    """sum_pi (<pi> - 1) w_pi: residue w_pi at each pi and zero elsewhere among finite places."""
    entries = []
    for pi, w in targets.items():
        if not isinstance(pi, Poly):
            pi = Poly.linear(FF.base, FF.base.coerce(pi))
        if pi.degree != 1:
            raise UnsupportedError("lifts are implemented at degree-one places only")
        if w.field != FF.base:
            raise DomainError("residue targets must lie in W of the base field")
        for a in w.rep:
            entries.append(FF.make(a, {pi.monic(): 1}))
            entries.append(FF.make(FF.base.neg(a)))
    return WittClass(FF, entries)


def _random_constant_class(k: Field, rng: random.Random, max_dim: int = 4) -> WittClass:
    if k.has_finite_witt_ring:
        return rng.choice(witt_ring_elements_safe(k))
    n = rng.randint(0, max_dim)
    return WittClass(k, [rng.choice([-1, 1]) * rng.randint(1, 12) for _ in range(n)])


def witt_ring_elements_safe(k):
    from .witt_rings import witt_ring_elements
    return witt_ring_elements(k)


def _random_torsion_constant(k: Field, rng: random.Random) -> WittClass:
    if not isinstance(k, Rationals):
        return rng.choice(torsion_elements(k))
    # signature-zero classes over Q: sums of <a> - <b> with a, b of equal sign
    out = WittClass.zero(k)
    for _ in range(rng.randint(0, 2)):
        s = rng.choice([-1, 1])
        out = out + WittClass(k, [s * rng.randint(1, 12), -s * rng.randint(1, 12)])
    return out


def sample_points_outside(k: Field, support, rng: random.Random, count: int) -> list:
    roots = set()
    for v in support:
        if v.kind == "monic" and v.poly.degree == 1:
            roots.add(k.neg(v.poly.coeffs[0]))
    pts = []
    cand = list(range(k.q)) if isinstance(k, FiniteField) and k.k == 1 else list(range(-20, 21))
    rng.shuffle(cand)
    for c in cand:
        x = k.coerce(c) if not isinstance(k, FiniteField) else c
        if x not in roots:
            pts.append(x)
        if len(pts) == count:
            break
    return pts


def is_constant(FF: FunctionField, z: WittClass, rng: random.Random, points: int = 3) -> bool:
    """Zero residues at every finite place and equal specializations at sample points."""
    if milnor_total_residue(z):
        return False
    c = first_residue(ValuationSpec.infinity(FF), z)
    if z != lift_constant(FF, c):
        return False
    support = [ValuationSpec(FF, "monic", poly=pi) for pi in places_of(z.rep)]
    for t in sample_points_outside(FF.base, support, rng, points):
        if specialization(ValuationSpec.at(FF, t), z) != c:
            return False
    return True


def units_residue_sequence_check(k: Field, support: list, samples: int = 50, seed: int = 0) -> dict:
    """Desk-scale check of 1 -> GW(k)^x -> GW(k(T))^x -> sum_pi (A_pi + W(k)_tor^(1)) -> 0."""
    rng = random.Random(seed)
    FF = FunctionField(k)
    places = [v if isinstance(v, ValuationSpec) else ValuationSpec.at(FF, v) for v in support]
    for v in places:
        if v.kind != "monic" or v.poly.degree != 1:
            raise UnsupportedError("support must consist of degree-one places")
    failures = []

    # (a) injectivity on constants
    if k.has_finite_witt_ring:
        consts = [x for x in witt_ring_elements_safe(k) if is_unit(x)]
    else:
        consts = [WittClass.square(k, rng.choice([-1, 1]) * rng.randint(1, 30)) for _ in range(samples)]
    one = WittClass.one(FF)
    for u in consts:
        for rank in (1, -1):
            if (lift_constant(FF, u) == one and rank == 1) != (u == WittClass.one(k) and rank == 1):
                failures.append({"check": "injectivity", "element": str(u)})

    # (b) surjectivity witnesses per place and target
    if isinstance(k, Rationals):
        targets = [_random_torsion_constant(k, rng) for _ in range(8)]
    else:
        targets = torsion_elements(k)
    witnesses = 0
    per_place = {}
    for v in places:
        a_options = (0, 1) if not v.is_sum_of_squares_uniformizer() else (0,)
        per_place[v.label] = []
        for e in a_options:
            for b in targets:
                w = contraction_witness(v, e, b)
                want = (e, b)
                got = contraction_classify(v, w)
                ok = (got.a_component, got.torsion_component.value) == want
                for other in places:
                    if other is not v and not contraction_classify(other, w).is_trivial():
                        ok = False
                if not ok:
                    failures.append({"check": "surjectivity", "place": v.label, "target": [e, str(b)]})
                witnesses += 1
                per_place[v.label].append((e, b, w))

    # (c) middle exactness: kill the residues of random units and test constancy
    kernel_checked = 0
    for _ in range(samples):
        y = GWClass.square(FF, FF.make(rng.choice(consts).rep[0] if consts[0].dim == 1 else 1))
        for v in places:
            e, b, w = rng.choice(per_place[v.label])
            y = y * w
        z = y
        for v in places:
            c = contraction_classify(v, z)
            w = contraction_witness(v, c.a_component, c.torsion_component.value)
            z = z * unit_inverse(w)
        kernel_checked += 1
        if any(not contraction_classify(v, z).is_trivial() for v in places) or not is_constant(FF, z.witt, rng):
            failures.append({"check": "exactness", "element": str(y.witt)})
    return {
        "base": str(k),
        "support": [v.label for v in places],
        "injectivity_checked": 2 * len(consts),
        "witnesses": witnesses,
        "targets_per_place": {lbl: len(ws) for lbl, ws in per_place.items()},
        "kernel_checked": kernel_checked,
        "failures": failures,
        "ok": not failures,
    }


# ------------------------------------------------------------------ axioms

SCENARIOS = ("A1:Q->Qp", "A2:Q(T)", "A3i:Q->Qp", "A3i:Q(T)->Qp(T)", "A3ii:k->k(T)")


def _random_rational(rng, lo=1, hi=30):
    return Fraction(rng.choice([-1, 1]) * rng.randint(lo, hi), rng.randint(1, hi))


def _random_rational_unit(rng: random.Random) -> WittClass:
    Q = Rationals()
    n = WittClass.zero(Q)
    for _ in range(rng.randint(0, 2)):
        n = n + rng.randint(1, 3) * WittClass(Q, [1, -abs(_random_rational(rng))])
    s = rng.choice([-1, 1])
    return s * (WittClass.square(Q, _random_rational(rng)) * (1 + n))


def _random_linear_factored(FF, rng, exclude=()):
    exps = {}
    for _ in range(rng.randint(0, 3)):
        r = rng.randint(-6, 6)
        f = Poly.linear(FF.base, FF.base.coerce(r))
        if f in exclude:
            continue
        exps[f] = exps.get(f, 0) + rng.choice([-2, -1, 1, 2, 3])
    return FF.make(_random_rational(rng, 1, 20), exps)


def axiom_checks(k: Field, scenario: str, samples: int = 200, seed: int = 0, p: int = 3) -> dict:
    rng = random.Random(seed)
    failures = []
    if scenario == "A1:Q->Qp":
        Q, Qp = Rationals(), PadicField(p)
        w, v = ValuationSpec.padic(p, Q), ValuationSpec.padic(p, Qp)
        for _ in range(samples):
            x = _random_rational_unit(rng)
            up = WittClass(Qp, x.rep)
            if is_unramified(w, x) != is_unramified(v, up):
                failures.append({"element": str(x)})
    elif scenario == "A2:Q(T)":
        FF = FunctionField(Rationals())
        for _ in range(samples):
            a = _random_linear_factored(FF, rng)
            x = WittClass.square(FF, a)
            ramified = set(milnor_total_residue(x))
            expected = {f for f, e in a.factors if e % 2}
            if ramified != expected:
                failures.append({"element": FF.fmt(a)})
        failures += [] if set(milnor_total_residue(WittClass.square(
            FF, FF.parse_element("(T-1)/(T+1)")))) == {FF.linear(1), FF.linear(-1)} else [{"element": "(T-1)/(T+1)"}]
    elif scenario == "A3i:Q->Qp":
        Q, Qp = Rationals(), PadicField(p)
        w, v = ValuationSpec.padic(p, Q), ValuationSpec.padic(p, Qp)
        for _ in range(samples):
            u = _random_rational(rng)
            while split_unit(p, u)[0]:
                u = _random_rational(rng)
            down = specialization(w, WittClass.square(Q, u))
            up = specialization(v, WittClass.square(Qp, u))
            if down != up:
                failures.append({"u": str(u)})
    elif scenario == "A3i:Q(T)->Qp(T)":
        E, F = FunctionField(Rationals()), FunctionField(PadicField(p))
        for _ in range(samples):
            r = rng.randint(-6, 6)
            piE = Poly.linear(E.base, Fraction(r))
            a = _random_linear_factored(E, rng, exclude=(piE,))
            aF = F.make(a.const, {Poly(F.base, f.coeffs): e for f, e in a.factors})
            piF = Poly.linear(F.base, Fraction(r))
            down = specialization(ValuationSpec.at(E, piE), WittClass.square(E, a))
            down_up = WittClass(F.base, down.rep)
            up = specialization(ValuationSpec.at(F, piF), WittClass.square(F, aF))
            if down_up != up:
                failures.append({"u": E.fmt(a), "place": r})
    elif scenario == "A3ii:k->k(T)":
        FF = FunctionField(k)
        if isinstance(k, FiniteField) and k.k == 1:
            places = [Poly.linear(k, 0), Poly.linear(k, 1)]
            places += [f for f in (Poly(k, [c, 0, 1]) for c in range(1, k.q)) if check_irreducible(k, f)][:1]
        else:
            places = [Poly.linear(k, k.coerce(r)) for r in (0, 1, -1, 2)]
        for _ in range(samples):
            pi = rng.choice(places)
            v = ValuationSpec.at(FF, pi)
            kappa = v.residue_field
            if isinstance(k, FiniteField):
                u = rng.randint(1, k.q - 1)
            else:
                u = _random_rational(rng)
            x = WittClass.square(FF, FF.make(u))
            if not is_unramified(v, x):
                failures.append({"u": k.fmt(u), "reason": "ramified"})
                continue
            img = kappa.coerce(u) if not isinstance(kappa, FiniteField) or kappa == k else u
            if specialization(v, x) != WittClass.square(kappa, img):
                failures.append({"u": k.fmt(u), "place": pi.fmt()})
    else:
        raise UnsupportedError(f"unknown scenario {scenario}")
    return {"scenario": scenario, "base": str(k), "samples": samples, "failures": failures,
            "ok": not failures}


def _random_function_field_class(FF: FunctionField, support: list, rng: random.Random) -> WittClass:
    k = FF.base
    reps = k.square_classes() or [1, -1, 2, 3, 5]
    entries = []
    for _ in range(rng.randint(1, 4)):
        c = rng.choice(reps)
        c = c if isinstance(k, FiniteField) else k.coerce(c)
        entries.append(FF.make(c, {v.poly: rng.randint(-1, 2) for v in support if rng.random() < 0.7}))
    return WittClass(FF, entries)


def milnor_round_trip(k: Field, support, samples: int = 500, seed: int = 0,
                      exhaustive_limit: int = 5000) -> dict:
    """Lift-then-residue on torsion targets over the support, and constancy of kernel members."""
    import itertools

    rng = random.Random(seed)
    FF = FunctionField(k)
    places = [v if isinstance(v, ValuationSpec) else ValuationSpec.at(FF, v) for v in support]
    if any(v.kind != "monic" or v.poly.degree != 1 for v in places):
        raise UnsupportedError("support must consist of degree-one places")
    if isinstance(k, Rationals):
        targets = [_random_torsion_constant(k, rng) for _ in range(6)] + [WittClass.zero(k)]
    else:
        targets = torsion_elements(k)
    failures = []
    combos = 0
    subsets = [places[:r] for r in range(1, len(places) + 1)]
    for sub in subsets:
        total = len(targets) ** len(sub)
        if total <= exhaustive_limit:
            it = itertools.product(targets, repeat=len(sub))
        else:
            it = (tuple(rng.choice(targets) for _ in sub) for _ in range(exhaustive_limit))
        for tup in it:
            want = {v.poly: w for v, w in zip(sub, tup) if not w.is_zero()}
            got = milnor_total_residue(milnor_lift(FF, {v.poly: w for v, w in zip(sub, tup)}))
            combos += 1
            if got != want:
                failures.append({"check": "round_trip", "targets": {v.label: str(w) for v, w in zip(sub, tup)}})
    kernel = 0
    for _ in range(samples):
        x = _random_function_field_class(FF, places, rng)
        z = x - milnor_lift(FF, milnor_total_residue(x))
        kernel += 1
        if not is_constant(FF, z, rng, points=2):
            failures.append({"check": "kernel_constant", "element": str(x)})
    return {"base": str(k), "support": [v.label for v in places], "round_trips": combos,
            "kernel_members": kernel, "failures": failures, "ok": not failures}
