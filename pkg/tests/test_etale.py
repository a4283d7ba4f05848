import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from discjet.base_ring import BaseRingDescriptor
from discjet.errors import PreconditionError
from discjet.etale import (
    PolyMap,
    RoofChart,
    jacobian_at,
    jet_at,
    poly_map_compose_exact,
    polymap_from_jet,
    polymap_identity,
    roof_compose_shared,
    roof_from_jet,
    roof_is_strict,
    roof_jet,
    roof_mirror,
    roof_restrict,
)
from discjet.jet_group import jet_classify, jet_compose, jet_identity, jet_invert
from discjet.sampling import (
    random_base,
    random_basepoint,
    random_jet,
    random_leg,
    random_roof,
)

Q = BaseRingDescriptor()
DUAL = BaseRingDescriptor(orders=(2,))

seeds = st.integers(0, 10**6)


def pm1(base, coeffs):
    """1-variable polynomial map from {degree: value}."""
    return PolyMap(1, base, [{(d,): v for d, v in coeffs.items()}])


# -- polynomial maps ------------------------------------------------------------

def test_compose_exact_keeps_all_degrees():
    f = pm1(Q, {1: 1, 2: 1})     # t + t^2
    g = pm1(Q, {1: 1, 3: 1})     # t + t^3
    h = poly_map_compose_exact(f, g)
    # (t + t^3) + (t + t^3)^2, nothing truncated
    assert h.components[0] == {
        (1,): Q.one(),
        (2,): Q.one(),
        (3,): Q.one(),
        (4,): Q.rational(2),
        (6,): Q.one(),
    }


def test_evaluate_exact():
    f = pm1(Q, {0: F(1, 2), 2: 3})
    assert f.evaluate((Q.rational(2),))[0] == Q.rational(F(25, 2))


@given(seeds)
def test_compose_evaluate_compatible(seed):
    rng = random.Random(seed)
    base = random_base(rng)
    n = rng.randint(1, 2)
    f = polymap_from_jet(random_jet(rng, n, 3, base))
    g = polymap_from_jet(random_jet(rng, n, 3, base))
    p = tuple(random_base and random_basepoint(rng, n, base))
    assert poly_map_compose_exact(f, g).evaluate(p) == f.evaluate(g.evaluate(p))


# -- Taylor expansion ---------------------------------------------------------------

def test_jet_at_rational_point():
    # f = t^2 - 1 at w = 1: f(1 + t) = 2t + t^2
    f = pm1(Q, {0: -1, 2: 1})
    comps = jet_at(f, (Q.one(),), 3)
    assert comps[0].terms == {(1,): Q.rational(2), (2,): Q.one()}


def test_jet_at_nilpotent_point():
    e = DUAL.generator(0)
    f = pm1(DUAL, {3: 1})  # t^3 at w = e: 3 e t^2 + t^3
    comps = jet_at(f, (e,), 3)
    assert comps[0].terms == {(2,): DUAL.rational(3) * e, (3,): DUAL.one()}


def test_jacobian_at():
    # f(x, y) = (x y, y + y^2) at (1, 2)
    f = PolyMap(2, Q, [{(1, 1): 1}, {(0, 1): 1, (0, 2): 1}])
    w = (Q.one(), Q.rational(2))
    J = jacobian_at(f, w)
    vals = [[x.rational_part() for x in row] for row in J]
    assert vals == [[2, 1], [0, 5]]


# -- roofs: frozen jet ------------------------------------------------------------------

def test_roof_jet_frozen():
    roof = RoofChart(pm1(Q, {1: 1, 3: 1}), pm1(Q, {1: 1, 2: -1}), (Q.zero(),))
    omega = roof_jet(roof, 4)
    got = {j[0]: v.rational_part() for j, v in omega.truncated_components(4)[0].terms.items()}
    assert got == {1: F(1), 2: F(-1), 3: F(-1), 4: F(2)}


# -- roofs: structural properties ----------------------------------------------------------

def draw_roof(seed, max_n=2, max_c=3, max_nu=3):
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    c = rng.randint(1, max_c)
    base = random_base(rng, max_nu=max_nu)
    return rng, n, c, base


@given(seeds)
def test_mirror_inverts(seed):
    rng, n, c, base = draw_roof(seed)
    roof = random_roof(rng, n, c, base)
    omega = roof_jet(roof, c)
    assert roof_jet(roof_mirror(roof), c) == jet_invert(omega)
    assert jet_compose(roof_jet(roof_mirror(roof), c), omega) == jet_identity(n, c, base)


@given(seeds)
def test_strict_iff_constant_free(seed):
    rng, n, c, base = draw_roof(seed)
    strict = rng.random() < 0.5
    if strict or base.is_rational:
        roof = random_roof(rng, n, c, base, strict=True)
        assert roof_is_strict(roof)
    else:
        roof = random_roof(rng, n, c, base, strict=False)
        assert not roof_is_strict(roof)
    assert roof_is_strict(roof) == jet_classify(roof_jet(roof, c)).in_K


@given(seeds)
def test_strict_implies_K_unconstrained(seed):
    # one-way law on fully general roofs: exact leg vanishing forces a
    # constant-free jet (the converse can fail by coincidence)
    rng, n, c, base = draw_roof(seed)
    roof = random_roof(rng, n, c, base)
    if roof_is_strict(roof):
        assert jet_classify(roof_jet(roof, c)).in_K


@given(seeds)
def test_restriction_preserves_jet(seed):
    rng, n, c, base = draw_roof(seed)
    roof = random_roof(rng, n, c, base)
    w_new = random_basepoint(rng, n, base)
    # build a restriction map g with g(w_new) = w exactly: jet-shaped map in (t - w_new) + w
    from discjet.sampling import _shift_map
    from discjet.etale import polymap_identity

    k = random_jet(rng, n, c, base, kind="K", extra_terms=2)
    P = polymap_from_jet(k)
    g = poly_map_compose_exact(P, _shift_map(n, base, w_new, sign=-1))
    # P(t - w_new) vanishes at w_new; now add w so it lands on the old basepoint
    comps = []
    for i, terms in enumerate(g.components):
        t = dict(terms)
        zero_j = (0,) * n
        cur = t.get(zero_j, base.zero())
        val = cur + roof.w[i]
        if val.is_zero():
            t.pop(zero_j, None)
        else:
            t[zero_j] = val
        comps.append(t)
    g = PolyMap(n, base, comps)

    restricted = roof_restrict(roof, g, w_new)
    assert roof_jet(restricted, c) == roof_jet(roof, c)


@given(seeds)
def test_shared_leg_composition(seed):
    rng, n, c, base = draw_roof(seed)
    w = random_basepoint(rng, n, base)
    legs = [random_leg(rng, n, c, base, w, strict=False) for _ in range(3)]
    first = RoofChart(legs[0], legs[1], w)
    second = RoofChart(legs[1], legs[2], w)
    composite = roof_compose_shared(first, second)
    assert composite.phi == legs[0] and composite.psi == legs[2]
    lhs = roof_jet(composite, c)
    rhs = jet_compose(roof_jet(second, c), roof_jet(first, c))
    assert lhs == rhs


@given(seeds)
def test_every_jet_has_a_witness_roof(seed):
    rng, n, c, base = draw_roof(seed)
    g = random_jet(rng, n, c, base)
    roof = roof_from_jet(g)
    assert roof_jet(roof, c) == g
    assert roof_is_strict(roof) == jet_classify(g).in_K


# -- validation ---------------------------------------------------------------------------

def test_roof_rejects_non_nilpotent_image():
    with pytest.raises(PreconditionError):
        RoofChart(pm1(Q, {0: 1, 1: 1}), pm1(Q, {1: 1}), (Q.zero(),))


def test_roof_jet_rejects_non_etale_leg():
    roof = RoofChart(pm1(Q, {2: 1}), pm1(Q, {1: 1}), (Q.zero(),))
    with pytest.raises(PreconditionError) as err:
        roof_jet(roof, 2)
    assert "phi" in str(err.value)


def test_restrict_requires_exact_basepoint_match():
    roof = RoofChart(pm1(DUAL, {1: 1}), pm1(DUAL, {1: 1, 2: 1}), (DUAL.zero(),))
    g = pm1(DUAL, {0: DUAL.generator(0), 1: 1})  # g(0) = e != 0
    with pytest.raises(PreconditionError):
        roof_restrict(roof, g, (DUAL.zero(),))


def test_mismatched_legs_rejected():
    with pytest.raises(PreconditionError):
        RoofChart(pm1(Q, {1: 1}), pm1(DUAL, {1: 1}), (Q.zero(),))
