"""Seeded random generators for jets, derivations and charts.

Shared by the test-suite and the command-line self-test so that both draw
from exactly the same distributions.  Everything takes an explicit
``random.Random`` instance; with a fixed seed the outputs are deterministic
across runs and platforms.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .base_ring import BaseRingDescriptor, BaseRingElement, nilpotency_index
from .errors import PreconditionError
from .etale import PolyMap, RoofChart, poly_map_compose_exact, polymap_from_jet
from .jet_group import JetAutomorphism
from .lie import Derivation
from .series import TruncatedSeries, indices_up_to, unit_index


def random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    num = rng.randint(-3, 3)
    if nonzero:
        while num == 0:
            num = rng.randint(-3, 3)
    return Fraction(num, rng.choice([1, 1, 2, 3]))


def random_base(rng: random.Random, max_generators: int = 2, max_nu: int = 4) -> BaseRingDescriptor:
    """A random coefficient ring with nilpotency index <= max_nu (possibly plain Q)."""
    if rng.random() < 0.25:
        return BaseRingDescriptor()
    orders = []
    budget = max_nu - 1  # sum of (N_i - 1) must stay <= budget
    for _ in range(rng.randint(1, max_generators)):
        if budget < 1:
            break
        N = rng.randint(2, min(4, budget + 1))
        orders.append(N)
        budget -= N - 1
    if not orders:
        return BaseRingDescriptor()
    return BaseRingDescriptor(orders=tuple(orders))


def random_nilpotent(rng: random.Random, base: BaseRingDescriptor, max_terms: int = 2) -> BaseRingElement:
    """A random nilpotent element (zero over a reduced base)."""
    if base.is_rational or base.is_symbolic:
        return base.zero()
    terms = {}
    m = base.num_generators
    for _ in range(rng.randint(0, max_terms)):
        exp = tuple(rng.randint(0, N - 1) for N in base.orders)
        if not any(exp):
            pick = rng.randrange(m)
            exp = tuple(1 if i == pick else 0 for i in range(m))
        terms[exp] = random_rational(rng, nonzero=True)
    return base.element(terms)


def random_element(rng: random.Random, base: BaseRingDescriptor, unit: bool = False) -> BaseRingElement:
    e = random_nilpotent(rng, base) + base.rational(
        random_rational(rng, nonzero=unit)
    )
    return e


def random_jet(
    rng: random.Random,
    n: int,
    c: int,
    base: BaseRingDescriptor,
    kind: str = "G",
    extra_terms: int = 3,
) -> JetAutomorphism:
    """A random element of G^(c) (kind "G"), K^(c) ("K") or its unipotent part ("Ku").

    The linear part is built as (triangular rationals with nonzero diagonal)
    plus nilpotent noise, which keeps its determinant a unit by construction.
    """
    if kind not in ("G", "K", "Ku"):
        raise PreconditionError(f"unknown jet kind {kind!r}")
    comps_terms: list[dict] = [dict() for _ in range(n)]
    zero_j = (0,) * n

    if kind == "G":
        for k in range(n):
            a = random_nilpotent(rng, base)
            if not a.is_zero():
                comps_terms[k][zero_j] = a

    if kind == "Ku":
        for k in range(n):
            comps_terms[k][unit_index(n, k)] = base.one()
    else:
        lower = rng.random() < 0.5
        for i in range(n):
            for j in range(n):
                if i == j:
                    entry = base.rational(random_rational(rng, nonzero=True))
                elif (i > j) == lower and rng.random() < 0.5:
                    entry = base.rational(random_rational(rng))
                else:
                    entry = base.zero()
                entry = entry + random_nilpotent(rng, base, max_terms=1)
                if not entry.is_zero():
                    comps_terms[i][unit_index(n, j)] = entry

    higher = indices_up_to(n, c, min_degree=2)
    if higher:
        for k in range(n):
            for _ in range(rng.randint(0, extra_terms)):
                j = rng.choice(higher)
                comps_terms[k][j] = random_element(rng, base)

    comps = [
        TruncatedSeries(n, c, {j: v for j, v in terms.items() if not v.is_zero()})
        for terms in comps_terms
    ]
    return JetAutomorphism(n, c, base, comps)


def random_basepoint(rng: random.Random, n: int, base: BaseRingDescriptor):
    return tuple(random_nilpotent(rng, base) for _ in range(n))


def _shift_map(n: int, base: BaseRingDescriptor, w, sign: int) -> PolyMap:
    comps = []
    for k in range(n):
        terms = {unit_index(n, k): base.one()}
        if not w[k].is_zero():
            terms[(0,) * n] = w[k] if sign > 0 else -w[k]
        comps.append(terms)
    return PolyMap(n, base, comps)


def random_leg(
    rng: random.Random,
    n: int,
    c: int,
    base: BaseRingDescriptor,
    w,
    strict: bool,
) -> PolyMap:
    """A polynomial map etale at w whose value at w is nilpotent (zero if strict).

    Built as P(t - w) for a random jet-shaped polynomial P, so the value at
    w is P(0) and the Jacobian at w is P's linear part.
    """
    g = random_jet(rng, n, c, base, kind="K" if strict else "G", extra_terms=2)
    P = polymap_from_jet(g, order=c)
    return poly_map_compose_exact(P, _shift_map(n, base, w, sign=-1))


def random_roof(
    rng: random.Random,
    n: int,
    c: int,
    base: BaseRingDescriptor,
    strict: bool | None = None,
) -> RoofChart:
    """A random valid roof.

    strict=None draws two unconstrained legs (their values at w are random
    nilpotents drawn independently).  strict=True forces both legs to vanish
    at w exactly.  strict=False guarantees a roof whose jet has a nonzero
    constant term -- phi vanishes at w while psi's value is a nonzero
    nilpotent, so the jet's constant is exactly that value; this needs a
    base with nilpotents.
    """
    w = random_basepoint(rng, n, base)
    if strict is None:
        return RoofChart(
            random_leg(rng, n, c, base, w, strict=False),
            random_leg(rng, n, c, base, w, strict=False),
            w,
        )
    if strict:
        return RoofChart(
            random_leg(rng, n, c, base, w, strict=True),
            random_leg(rng, n, c, base, w, strict=True),
            w,
        )
    if base.is_rational or base.is_symbolic:
        raise PreconditionError(
            "a non-strict roof needs nilpotents in the base ring"
        )
    phi = random_leg(rng, n, c, base, w, strict=True)
    psi = random_leg(rng, n, c, base, w, strict=True)
    # shift one component of psi by a nonzero nilpotent so psi(w) != 0
    value = random_nilpotent(rng, base, max_terms=1)
    while value.is_zero():
        value = random_nilpotent(rng, base, max_terms=1)
    which = rng.randrange(n)
    comps = []
    zero_j = (0,) * n
    for i, terms in enumerate(psi.components):
        t = dict(terms)
        if i == which:
            t[zero_j] = t.get(zero_j, base.zero()) + value
        comps.append(t)
    return RoofChart(phi, PolyMap(n, base, comps), w)


def random_derivation(
    rng: random.Random,
    n: int,
    c: int,
    base: BaseRingDescriptor,
    min_m_order: int = 1,
    max_terms: int = 3,
) -> Derivation:
    """A random vector-field jet whose coefficients start at degree min_m_order."""
    idx = [j for j in indices_up_to(n, c) if sum(j) >= min_m_order]
    coeffs = []
    for _ in range(n):
        terms = {}
        if idx:
            for _ in range(rng.randint(0, max_terms)):
                j = rng.choice(idx)
                v = random_element(rng, base)
                if not v.is_zero():
                    terms[j] = v
        coeffs.append(TruncatedSeries(n, c, terms))
    return Derivation(n, c, base, coeffs)


def random_restriction(rng: random.Random, c: int, roof: RoofChart, w_new) -> PolyMap:
    """A chart change g with g(w_new) = roof.w exactly and unit Jacobian at w_new.

    Built as P(t - w_new) + (roof.w) for a random constant-free jet-shaped
    polynomial P, so the value at w_new is exactly the old basepoint.
    """
    n, base = roof.phi.n, roof.phi.base
    k = random_jet(rng, n, c, base, kind="K", extra_terms=2)
    g = poly_map_compose_exact(polymap_from_jet(k), _shift_map(n, base, w_new, sign=-1))
    comps = []
    zero_j = (0,) * n
    for i, terms in enumerate(g.components):
        t = dict(terms)
        val = t.get(zero_j, base.zero()) + roof.w[i]
        if val.is_zero():
            t.pop(zero_j, None)
        else:
            t[zero_j] = val
        comps.append(t)
    return PolyMap(n, base, comps)
