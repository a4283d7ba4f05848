import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from discjet.base_ring import BaseRingDescriptor, nilpotency_index
from discjet.errors import PreconditionError
from discjet.jet_group import (
    JetAutomorphism,
    jet_classify,
    jet_compose,
    jet_from_terms,
    jet_identity,
    jet_invert,
    jet_scaling,
    jet_translation,
    jets_c_equivalent,
    split_linear_unipotent,
    split_translation,
)
from discjet.sampling import random_base, random_jet, random_nilpotent
from discjet.series import TruncatedSeries, series_substitute, series_truncate

from oracles import sympy_compose_1var, sympy_reversion_1var

Q = BaseRingDescriptor()
DUAL = BaseRingDescriptor(orders=(2,))


def jet1(c, coeffs, base=Q):
    """One-variable jet from {degree: coefficient}."""
    return jet_from_terms(1, c, base, [{(d,): v for d, v in coeffs.items()}])


def coeffs1(g, order=None):
    order = g.c if order is None else order
    comp = series_truncate(g.components[0], order)
    return {j[0]: c.rational_part() for j, c in comp.terms.items()}


# -- frozen values -------------------------------------------------------------

def test_compose_frozen():
    r = jet_compose(jet1(4, {1: 1, 2: 1}), jet1(4, {1: 1, 3: 1}))
    assert coeffs1(r) == {1: F(1), 2: F(1), 3: F(1), 4: F(2)}


def test_invert_frozen_catalan():
    inv = jet_invert(jet1(4, {1: 1, 2: 1}))
    assert coeffs1(inv) == {1: F(1), 2: F(-1), 3: F(2), 4: F(-5)}


def test_split_linear_unipotent_frozen():
    A, u = split_linear_unipotent(jet1(3, {1: 2, 2: 1}))
    assert coeffs1(A) == {1: F(2)}
    assert coeffs1(u) == {1: F(1), 2: F(1, 2)}
    assert jet_compose(A, u) == jet1(3, {1: 2, 2: 1})


# -- the working-precision story -----------------------------------------------

def test_naive_truncation_is_not_associative_but_group_ops_are():
    """Composing with truncation at c on the nose loses associativity over
    a base with nilpotents; the working-order arithmetic does not."""
    base = DUAL
    e = base.generator(0)
    c = 2
    rho = jet1(c, {1: 1, 2: 1}, base)
    sigma = jet1(c, {1: 1, 2: 1}, base)
    gamma = jet_from_terms(1, c, base, [{(0,): e, (1,): 1}])

    def naive(g, h):
        comps = [
            series_truncate(
                series_substitute(series_truncate(gc, c), h.truncated_components(c), c),
                c,
            )
            for gc in g.truncated_components(c)
        ]
        return comps

    left = naive(rho, sigma)
    left = [
        series_truncate(
            series_substitute(lc, gamma.truncated_components(c), c), c
        )
        for lc in left
    ]
    right_inner = naive(sigma, gamma)
    right = [
        series_truncate(series_substitute(series_truncate(rc, c), tuple(right_inner), c), c)
        for rc in rho.truncated_components(c)
    ]
    assert left != right  # 6*e*t^2 discrepancy: the naive quotient is not a group

    assert jet_compose(jet_compose(rho, sigma), gamma) == jet_compose(
        rho, jet_compose(sigma, gamma)
    )


def test_conjugating_top_degree_term_down():
    # conjugate t + e*t^3 ... sanity-check the mechanism the working order absorbs:
    # (t - e) o (t + u t^{c+1}) o (t + e) at c = 2 pushes a u-term into degree 2
    base = DUAL
    e = base.generator(0)
    c = 2
    tau = jet_from_terms(1, c, base, [{(0,): e, (1,): 1}])
    k = jet_from_terms(1, c, base, [{(1,): 1, (3,): 1}])  # t + t^{c+1}
    conj = jet_compose(jet_compose(tau, k), jet_invert(tau))
    got = {
        j[0]: coeff
        for j, coeff in series_truncate(conj.components[0], c).terms.items()
    }
    assert got[2] == base.rational(-3) * e  # -(c+1) u e t^c with u = 1


# -- group axioms ----------------------------------------------------------------

seeds = st.integers(0, 10**6)


def draw_group(seed, max_n=2, max_c=4):
    rng = random.Random(seed)
    n = rng.randint(1, max_n)
    c = rng.randint(1, max_c)
    base = random_base(rng)
    return rng, n, c, base


@given(seeds)
def test_associativity(seed):
    rng, n, c, base = draw_group(seed)
    g, h, k = (random_jet(rng, n, c, base) for _ in range(3))
    assert jet_compose(jet_compose(g, h), k) == jet_compose(g, jet_compose(h, k))


@given(seeds)
def test_identity_laws(seed):
    rng, n, c, base = draw_group(seed)
    g = random_jet(rng, n, c, base)
    e = jet_identity(n, c, base)
    assert jet_compose(g, e) == g
    assert jet_compose(e, g) == g


@given(seeds)
def test_inverse_two_sided(seed):
    rng, n, c, base = draw_group(seed)
    g = random_jet(rng, n, c, base)
    gi = jet_invert(g)
    e = jet_identity(n, c, base)
    assert jet_compose(g, gi) == e
    assert jet_compose(gi, g) == e


@given(seeds)
def test_inverse_of_inverse(seed):
    rng, n, c, base = draw_group(seed)
    g = random_jet(rng, n, c, base)
    assert jet_invert(jet_invert(g)) == g


# -- inversion against an independent oracle ---------------------------------------

@given(seeds)
def test_invert_matches_sympy_reversion(seed):
    rng = random.Random(seed)
    c = rng.randint(2, 5)
    coeffs = {1: F(1)}
    for d in range(2, c + 1):
        if rng.random() < 0.7:
            coeffs[d] = F(rng.randint(-3, 3), rng.choice([1, 2]))
    coeffs = {d: q for d, q in coeffs.items() if q}
    coeffs[1] = F(1)
    inv = jet_invert(jet1(c, coeffs))
    assert coeffs1(inv) == sympy_reversion_1var(coeffs, c)


# -- splittings ----------------------------------------------------------------------

@given(seeds)
def test_split_translation_recomposes(seed):
    rng, n, c, base = draw_group(seed)
    g = random_jet(rng, n, c, base)
    a, k = split_translation(g)
    assert jet_classify(k).in_K
    assert jet_compose(jet_translation(n, c, base, a), k) == g


@given(seeds)
def test_split_linear_unipotent_recomposes(seed):
    rng, n, c, base = draw_group(seed)
    k = random_jet(rng, n, c, base, kind="K")
    A, u = split_linear_unipotent(k)
    cls_u = jet_classify(u)
    assert cls_u.in_K_u
    # A is linear: no terms of degree != 1
    for comp in A.truncated_components(A.c):
        assert all(sum(j) == 1 for j in comp.terms)
    assert jet_compose(A, u) == k


def test_split_linear_unipotent_needs_K():
    g = jet_from_terms(1, 2, DUAL, [{(0,): DUAL.generator(0), (1,): 1}])
    with pytest.raises(PreconditionError):
        split_linear_unipotent(g)


# -- classification --------------------------------------------------------------------

def test_classify_flags():
    e = DUAL.generator(0)
    g = jet_from_terms(1, 3, DUAL, [{(0,): e, (1,): 1, (2,): 1}])
    cls = jet_classify(g)
    assert cls.in_G and not cls.in_K and not cls.in_K_u

    k = jet1(3, {1: 2, 2: 1}, DUAL)
    cls = jet_classify(k)
    assert cls.in_K and not cls.in_K_u

    u = jet1(3, {1: 1, 3: 5}, DUAL)
    cls = jet_classify(u)
    assert cls.in_K_u
    # u agrees with the identity up to degree 2 but not degree 3
    assert cls.n_levels == (True, True, False)

    ident = jet_identity(2, 2, Q)
    assert jet_classify(ident).n_levels == (True, True)


@given(seeds)
def test_scaling_translation_classify(seed):
    rng = random.Random(seed)
    base = random_base(rng)
    n, c = rng.randint(1, 2), rng.randint(1, 3)
    z = F(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2]))
    s = jet_scaling(n, c, base, z)
    assert jet_classify(s).in_K
    a = tuple(random_nilpotent(rng, base) for _ in range(n))
    tau = jet_translation(n, c, base, a)
    assert jet_classify(tau).in_G
    assert split_translation(tau)[1] == jet_identity(n, c, base)


# -- equivalence at lower orders ----------------------------------------------------

@given(seeds)
def test_c_equivalence_respects_composition(seed):
    rng, n, c, base = draw_group(seed)
    if c < 2:
        c = 2
    g, h = random_jet(rng, n, c, base), random_jet(rng, n, c, base)
    cp = rng.randint(1, c - 1)
    assert jets_c_equivalent(jet_compose(g, h), jet_compose(g, h), cp)
    # equivalence is coarser than equality
    if g == h:
        assert jets_c_equivalent(g, h, cp)


def test_c_equivalent_bounds():
    g = jet_identity(1, 3, Q)
    with pytest.raises(PreconditionError):
        jets_c_equivalent(g, g, 0)
    with pytest.raises(PreconditionError):
        jets_c_equivalent(g, g, 4)


# -- lift independence ------------------------------------------------------------------

@given(seeds)
def test_inner_padding_invisible(seed):
    """Tail terms of the inner operand above order c never reach the composite."""
    rng, n, c, base = draw_group(seed)
    rho = random_jet(rng, n, c, base)
    sigma = random_jet(rng, n, c, base)
    padded = _pad(rng, sigma)
    assert jet_compose(rho, sigma) == jet_compose(rho, padded)


@given(seeds)
def test_outer_padding_invisible_for_constant_free_inner(seed):
    rng, n, c, base = draw_group(seed)
    rho = random_jet(rng, n, c, base)
    sigma = random_jet(rng, n, c, base, kind="K")
    padded = _pad(rng, rho)
    assert jet_compose(rho, sigma) == jet_compose(padded, sigma)


def _pad(rng, g):
    """Add random junk at degrees c+1, c+2 to each component of g."""
    from discjet.sampling import random_element
    from discjet.series import indices_up_to

    n, c, base = g.n, g.c, g.base
    comps = []
    for comp in g.components:
        terms = dict(series_truncate(comp, c).terms)
        for j in indices_up_to(n, c + 2, min_degree=c + 1):
            if rng.random() < 0.4:
                v = random_element(rng, base)
                if not v.is_zero():
                    terms[j] = v
        comps.append(TruncatedSeries(n, c + 2, terms))
    return JetAutomorphism(n, c, base, comps)


def test_outer_padding_visible_with_nilpotent_inner_constant():
    """The boundary of the well-definedness statement: padding the *outer*
    operand does change the composite when the inner operand has a nonzero
    nilpotent constant term.  Pinned so the scoping stays honest."""
    base = DUAL
    e = base.generator(0)
    c = 2
    rho = jet1(c, {1: 1}, base)
    rho_padded = jet_from_terms(1, c, base, [{(1,): 1, (3,): 1}])
    sigma = jet_from_terms(1, c, base, [{(0,): e, (1,): 1}])
    lhs = jet_compose(rho, sigma)
    rhs = jet_compose(rho_padded, sigma)
    assert lhs != rhs
    diff = series_truncate(rhs.components[0], c) - series_truncate(lhs.components[0], c)
    assert diff.terms == {(2,): base.rational(3) * e}  # 3 e t^2 leaks in


# -- constructor validation ----------------------------------------------------------

def test_rejects_c_zero():
    with pytest.raises(PreconditionError):
        jet_identity(1, 0, Q)


def test_rejects_unit_constant():
    with pytest.raises(PreconditionError):
        jet_from_terms(1, 2, Q, [{(0,): 1, (1,): 1}])


def test_rejects_non_unit_linear():
    with pytest.raises(PreconditionError):
        jet_from_terms(1, 2, Q, [{(2,): 1}])
    # nilpotent-only diagonal entry is not a unit either
    with pytest.raises(PreconditionError):
        jet_from_terms(1, 2, DUAL, [{(1,): DUAL.generator(0)}])


def test_rejects_mixed_groups():
    with pytest.raises(PreconditionError):
        jet_compose(jet_identity(1, 2, Q), jet_identity(1, 3, Q))
    with pytest.raises(PreconditionError):
        jet_compose(jet_identity(1, 2, Q), jet_identity(1, 2, DUAL))


# -- symbolic coefficients -----------------------------------------------------------

def test_symbolic_composition_table_order_4():
    """Composition with indeterminate coefficients: the t^2..t^4 rows of the
    unipotent composition law in one variable."""
    sym = BaseRingDescriptor(symbolic_names=("r2", "r3", "r4", "s2", "s3", "s4"))
    r2, r3, r4, s2, s3, s4 = (sym.generator(i) for i in range(6))
    rho = jet_from_terms(1, 4, sym, [{(1,): 1, (2,): r2, (3,): r3, (4,): r4}])
    sigma = jet_from_terms(1, 4, sym, [{(1,): 1, (2,): s2, (3,): s3, (4,): s4}])
    comp = jet_compose(rho, sigma).components[0]
    assert comp.coefficient((2,)) == r2 + s2
    assert comp.coefficient((3,)) == r3 + r2 * s2 * 2 + s3
    assert comp.coefficient((4,)) == r4 + r3 * s2 * 3 + r2 * s2 * s2 + r2 * s3 * 2 + s4
