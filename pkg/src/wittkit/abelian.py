"""Finite abelian groups given by explicit elements: orders, invariant factors, quotients."""

from sympy import factorint


def element_order(g, op, identity, cap: int = 1 << 20) -> int:
    x, n = g, 1
    while x != identity:
        x = op(x, g)
        n += 1
        if n > cap:
            raise ValueError("element order exceeds cap")
    return n


def _power(g, k, op, identity):
    out, base = identity, g
    while k:
        if k & 1:
            out = op(out, base)
        base = op(base, base)
        k >>= 1
    return out


def invariant_factors(elements, op, identity) -> list:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group (empty list for the trivial group)."""
    elements = list(elements)
    n = len(elements)
    by_prime = {}
    for p in factorint(n):
        counts = [1]
        k = 1
        while counts[-1] < p ** factorint(n)[p]:
            counts.append(sum(1 for g in elements if _power(g, p ** k, op, identity) == identity))
            k += 1
        # number of cyclic factors of order >= p^k is log_p(counts[k] / counts[k-1])
        ge = []
        for k in range(1, len(counts)):
            ratio, m = counts[k] // counts[k - 1], 0
            while ratio > 1:
                ratio //= p
                m += 1
            ge.append(m)
        exps = []
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            exps += [k + 1] * (ge[k] - nxt)
        by_prime[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in by_prime.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, exps in by_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return sorted(factors)


def structure_string(factors) -> str:
    if not factors:
        return "0"
    return " + ".join(f"Z/{d}" for d in factors)


def subgroup_closure(generators, op, identity) -> set:
    seen = {identity}
    frontier = [identity]
    gens = list(generators)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = op(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def quotient(elements, subgroup, op, key=repr):
    """Cosets of a subgroup: returns (coset representatives, map element -> representative)."""
    sub = list(subgroup)
    rep_of = {}
    reps = []
    for g in sorted(elements, key=key):
        if g in rep_of:
            continue
        reps.append(g)
        for h in sub:
            rep_of[op(g, h)] = g
    return reps, rep_of


def quotient_invariants(elements, subgroup, op, identity, key=repr) -> list:
    reps, rep_of = quotient(elements, subgroup, op, key)
    qop = lambda a, b: rep_of[op(a, b)]
    return invariant_factors(reps, qop, rep_of[identity])
