"""The runtime acceptance suite, shared by the test-suite and `discjet selftest`.

One function per criterion.  ``run_all`` executes them in a fixed order and
hands each a generator seeded from ``f"{seed}:{name}"``, so a fixed seed
gives a byte-identical report.  Criteria never raise: an exception inside
one is reported as a failure with the exception text.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .base_ring import BaseRingDescriptor
from .etale import (
    RoofChart,
    roof_compose_shared,
    roof_from_jet,
    roof_is_strict,
    roof_jet,
    roof_mirror,
    roof_restrict,
)
from .hopf import (
    CoordRingElement,
    Polynomial,
    antipode,
    antipode_multiply_convolution,
    check_homogeneous,
    coproduct,
    counit,
    generic_components,
)
from .jet_group import (
    jet_classify,
    jet_compose,
    jet_from_terms,
    jet_identity,
    jet_invert,
)
from .jsonio import coproduct_document, render
from .lie import derivation_bracket, derivation_monomial, exp_derivation, log_unipotent
from .lie import adjoint as lie_adjoint
from .rep import (
    extension_order,
    factoring_order,
    rep_check_homomorphism,
    rep_determinant,
    rep_eval,
    rep_jet_standard,
    rep_trivial,
    rep_weights,
)
from .sampling import (
    random_base,
    random_basepoint,
    random_derivation,
    random_element,
    random_jet,
    random_leg,
    random_restriction,
    random_roof,
)
from .series import indices_up_to, matrix_mul, series_substitute

GOLDEN_COPRODUCT = "golden/coproduct_n1_c4.json"

#: configurations for the group-axiom sweep: (n, c, nilpotency orders)
GROUP_AXIOM_GRID = [
    (1, 6, (4,)),
    (1, 5, ()),
    (1, 4, (2, 2)),
    (2, 3, (2,)),
    (2, 4, ()),
    (3, 2, (2,)),
    (3, 1, (2, 2)),
]


@dataclass(frozen=True)
class CriterionResult:
    name: str
    ok: bool
    detail: str


# -- 1: the symbolic composition table -------------------------------------------------


def composition_table(rng: random.Random) -> CriterionResult:
    name = "composition-table"
    base = BaseRingDescriptor(symbolic_names=("r2", "r3", "r4", "s2", "s3", "s4"))
    r2, r3, r4, s2, s3, s4 = (base.generator(i) for i in range(6))
    rho = jet_from_terms(1, 4, base, [{(1,): 1, (2,): r2, (3,): r3, (4,): r4}])
    sigma = jet_from_terms(1, 4, base, [{(1,): 1, (2,): s2, (3,): s3, (4,): s4}])
    comp = jet_compose(rho, sigma).truncated_components(4)[0]
    expected = {
        (1,): base.one(),
        (2,): r2 + s2,
        (3,): r3 + r2 * s2 * 2 + s3,
        (4,): r4 + r3 * s2 * 3 + r2 * s2 * s2 + r2 * s3 * 2 + s4,
    }
    if dict(comp.terms) != expected:
        return CriterionResult(name, False, "a symbolic composition coefficient differs")
    return CriterionResult(
        name, True, "n=1 c=4 symbolic composition coefficients of t^2..t^4, exact"
    )


# -- 2: the coproduct table in the unipotent chart -------------------------------------


def coproduct_table(rng: random.Random) -> CriterionResult:
    name = "coproduct-table"
    table = coproduct(1, 4)

    def unipotent(poly: Polynomial) -> Polynomial:
        return poly.substitute(
            lambda v: Polynomial.constant(1) if v[2] == (1,) else None
        )

    def b(j: int) -> Polynomial:
        return Polynomial.variable("b", 0, (j,))

    def c_(j: int) -> Polynomial:
        return Polynomial.variable("c", 0, (j,))

    expected = {
        2: b(2) + c_(2),
        3: b(3) + b(2) * c_(2) * 2 + c_(3),
        4: b(4) + b(3) * c_(2) * 3 + b(2) * c_(2) ** 2 + b(2) * c_(3) * 2 + c_(4),
    }
    for j, want in expected.items():
        if unipotent(table[(0, (j,))]) != want:
            return CriterionResult(name, False, f"Delta(a_{j}) differs in the unipotent chart")
    return CriterionResult(name, True, "Delta(a_2), Delta(a_3), Delta(a_4) unipotent rows, exact")


# -- 3: grading of the coproduct --------------------------------------------------------


def coproduct_grading(rng: random.Random) -> CriterionResult:
    name = "coproduct-grading"
    checked = 0
    for n in (1, 2):
        table = coproduct(n, 5)
        for (k, J), poly in table.items():
            if not check_homogeneous(poly, sum(J) - 1):
                return CriterionResult(
                    name, False, f"Delta of a^{k}_{list(J)} is not degree-homogeneous"
                )
            checked += 1
    return CriterionResult(
        name, True, f"{checked} generator coproducts degree-0 homogeneous (n=1,2 all c<=5)"
    )


# -- 4: group axioms over nilpotent bases ------------------------------------------------


def group_axioms(rng: random.Random) -> CriterionResult:
    name = "group-axioms"
    for n, c, orders in GROUP_AXIOM_GRID:
        base = BaseRingDescriptor(orders=orders)
        e = jet_identity(n, c, base)
        for i in range(200):
            rho = random_jet(rng, n, c, base, kind="G")
            sigma = random_jet(rng, n, c, base, kind="G")
            gamma = random_jet(rng, n, c, base, kind="G")
            where = f"(n={n}, c={c}, orders={list(orders)}, case {i})"
            if jet_compose(jet_compose(rho, sigma), gamma) != jet_compose(
                rho, jet_compose(sigma, gamma)
            ):
                return CriterionResult(name, False, f"associativity failed {where}")
            if not (jet_compose(rho, e) == rho == jet_compose(e, rho)):
                return CriterionResult(name, False, f"identity law failed {where}")
            inv = jet_invert(sigma)
            if not (jet_compose(sigma, inv) == e == jet_compose(inv, sigma)):
                return CriterionResult(name, False, f"inverse law failed {where}")
    return CriterionResult(
        name,
        True,
        f"{len(GROUP_AXIOM_GRID)} configurations x 200 seeded triples "
        "(n<=3, c<=6, nu<=4), exact",
    )


# -- 5: composition is independent of the chosen lift ------------------------------------


def _padded(rng: random.Random, g):
    """A different representative of the same class: junk above degree c."""
    comps = [dict(s.terms) for s in g.truncated_components(g.c)]
    for _ in range(2):
        k = rng.randrange(g.n)
        deg = g.c + rng.randint(1, 2)
        idx = rng.choice(indices_up_to(g.n, deg, min_degree=deg))
        comps[k][idx] = random_element(rng, g.base)
    return jet_from_terms(g.n, g.c, g.base, comps)


def quotient_well_definedness(rng: random.Random) -> CriterionResult:
    name = "quotient-well-definedness"
    for i in range(100):
        n, c = rng.choice([(1, 3), (1, 4), (2, 2)])
        base = random_base(rng)
        rho = random_jet(rng, n, c, base, kind="G")
        inner_kind = "G" if base.is_rational else "K"
        sigma = random_jet(rng, n, c, base, kind=inner_kind)
        rho_padded = _padded(rng, rho)
        sigma_padded = _padded(rng, sigma)
        if rho_padded != rho or sigma_padded != sigma:
            return CriterionResult(name, False, f"padding changed the class (case {i})")
        if jet_compose(rho_padded, sigma_padded) != jet_compose(rho, sigma):
            return CriterionResult(name, False, f"composition saw the padding (case {i})")
    return CriterionResult(name, True, "100 padded-lift compositions, exact")


# -- 6: Hopf axioms -----------------------------------------------------------------------


def hopf_axioms(rng: random.Random) -> CriterionResult:
    name = "hopf-axioms"
    shapes = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (2, 3)]
    for n, c in shapes:
        where = f"(n={n}, c={c})"
        # coassociativity: composing three generic alphabets either way agrees
        b = generic_components(n, c, "b")
        cc = generic_components(n, c, "c")
        d = generic_components(n, c, "d")
        left = [series_substitute(series_substitute(bk, cc, c), d, c) for bk in b]
        cd = [series_substitute(ck, d, c) for ck in cc]
        right = [series_substitute(bk, cd, c) for bk in b]
        if left != right:
            return CriterionResult(name, False, f"coassociativity failed {where}")
        # counit laws: evaluating either slot at the identity recovers the generator
        table = coproduct(n, c)
        eps = counit(n, c)

        def pin(alphabet, v):
            a, k, J = v
            if a == alphabet:
                return Polynomial.constant(eps[(k, J)])
            return Polynomial.variable("a", k, J)

        for (k, J), poly in table.items():
            want = Polynomial.variable("a", k, J)
            if poly.substitute(lambda v: pin("b", v)) != want:
                return CriterionResult(name, False, f"left counit law failed {where}")
            if poly.substitute(lambda v: pin("c", v)) != want:
                return CriterionResult(name, False, f"right counit law failed {where}")
        # antipode laws: both convolutions collapse to the counit
        S = antipode(n, c)
        for side in ("left", "right"):
            conv = antipode_multiply_convolution(n, c, table, S, side=side)
            for (k, J), elem in conv.items():
                if elem != CoordRingElement.constant(n, eps[(k, J)]):
                    return CriterionResult(
                        name, False, f"{side} antipode law failed {where}"
                    )
    return CriterionResult(
        name, True, "coassociativity, counit, antipode laws for n=1 c<=4 and n=2 c<=3"
    )


# -- 7: the Lie suite ----------------------------------------------------------------------


def lie_suite(rng: random.Random) -> CriterionResult:
    name = "lie-suite"
    Q = BaseRingDescriptor()
    flow = exp_derivation(derivation_monomial(1, 4, Q, (2,), 0))
    want = jet_from_terms(1, 4, Q, [{(1,): 1, (2,): 1, (3,): 1, (4,): 1}])
    if flow != want:
        return CriterionResult(name, False, "exp(t^2 d/dt) at c=4 differs")
    for i in range(100):
        n, c = rng.choice([(1, 4), (2, 2), (2, 3)])
        base = random_base(rng)
        D1, D2, D3 = (random_derivation(rng, n, c, base) for _ in range(3))
        jacobi = (
            derivation_bracket(D1, derivation_bracket(D2, D3))
            + derivation_bracket(D2, derivation_bracket(D3, D1))
            + derivation_bracket(D3, derivation_bracket(D1, D2))
        )
        if any(not f.is_zero() for f in jacobi.coefficients):
            return CriterionResult(name, False, f"Jacobi identity failed (case {i})")
    for i in range(100):
        n, c = rng.choice([(1, 3), (1, 4), (2, 2)])
        base = random_base(rng)
        D = random_derivation(rng, n, c, base, min_m_order=2)
        if log_unipotent(exp_derivation(D)) != D:
            return CriterionResult(name, False, f"log(exp(D)) != D (case {i})")
        u = random_jet(rng, n, c, base, kind="Ku")
        if exp_derivation(log_unipotent(u)) != u:
            return CriterionResult(name, False, f"exp(log(u)) != u (case {i})")
    for i in range(50):
        n, c = rng.choice([(1, 3), (2, 2)])
        base = random_base(rng)
        k = random_jet(rng, n, c, base, kind="K")
        D = random_derivation(rng, n, c, base, min_m_order=2)
        lhs = exp_derivation(lie_adjoint(k, D))
        rhs = jet_compose(jet_compose(k, exp_derivation(D)), jet_invert(k))
        if lhs != rhs:
            return CriterionResult(name, False, f"conjugation/adjoint compatibility failed (case {i})")
    return CriterionResult(
        name,
        True,
        "frozen exponential; 100 Jacobi triples; 100 exp/log round trips; "
        "50 adjoint-conjugation pairs, exact",
    )


# -- 8: the roof suite -----------------------------------------------------------------------


def roof_suite(rng: random.Random) -> CriterionResult:
    name = "roof-suite"

    def draw():
        n = rng.randint(1, 2)
        c = rng.randint(1, 3)
        return n, c, random_base(rng, max_nu=3)

    for i in range(100):
        n, c, base = draw()
        roof = random_roof(rng, n, c, base)
        w_new = random_basepoint(rng, n, base)
        g = random_restriction(rng, c, roof, w_new)
        if roof_jet(roof_restrict(roof, g, w_new), c) != roof_jet(roof, c):
            return CriterionResult(name, False, f"similarity invariance failed (case {i})")
    for i in range(100):
        n, c, base = draw()
        roof = random_roof(rng, n, c, base)
        omega = roof_jet(roof, c)
        mirrored = roof_jet(roof_mirror(roof), c)
        if mirrored != jet_invert(omega) or jet_compose(mirrored, omega) != jet_identity(
            n, c, base
        ):
            return CriterionResult(name, False, f"mirror law failed (case {i})")
    for i in range(100):
        n, c, base = draw()
        want_strict = base.is_rational or rng.random() < 0.5
        roof = random_roof(rng, n, c, base, strict=want_strict)
        if roof_is_strict(roof) != want_strict:
            return CriterionResult(name, False, f"strictness flag wrong (case {i})")
        if roof_is_strict(roof) != jet_classify(roof_jet(roof, c)).in_K:
            return CriterionResult(
                name, False, f"strictness does not match K-membership (case {i})"
            )
    for i in range(100):
        n, c, base = draw()
        w = random_basepoint(rng, n, base)
        legs = [random_leg(rng, n, c, base, w, strict=False) for _ in range(3)]
        first = RoofChart(legs[0], legs[1], w)
        second = RoofChart(legs[1], legs[2], w)
        lhs = roof_jet(roof_compose_shared(first, second), c)
        if lhs != jet_compose(roof_jet(second, c), roof_jet(first, c)):
            return CriterionResult(name, False, f"order reversal failed (case {i})")
    for i in range(50):
        n, c, base = draw()
        g = random_jet(rng, n, c, base)
        if roof_jet(roof_from_jet(g), c) != g:
            return CriterionResult(name, False, f"witness roof missed its target (case {i})")
    return CriterionResult(
        name,
        True,
        "similarity, mirror, strictness<=>K, order reversal x100 (nu<=3); 50 witnesses",
    )


# -- 9: the representation suite ----------------------------------------------------------------


def rep_suite(rng: random.Random) -> CriterionResult:
    name = "rep-suite"
    reps = {}
    for n, c in [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2)]:
        rep = rep_jet_standard(n, c)
        reps[(n, c)] = rep
        report = rep_check_homomorphism(rep)
        if not report.ok:
            return CriterionResult(
                name,
                False,
                f"homomorphism check failed at n={n} c={c}, entry {report.failing_entry}",
            )
    rep12 = reps[(1, 2)]
    if rep_weights(rep12) != (-1, -2):
        return CriterionResult(name, False, "weights at n=1 c=2 differ from (-1, -2)")
    if extension_order(rep12) != 2:
        return CriterionResult(name, False, "extension order at n=1 c=2 differs from 2")
    constructed = list(reps.values()) + [rep_trivial(2, 2), rep_determinant(2, 2)]
    for rep in constructed:
        if factoring_order(rep) > extension_order(rep):
            return CriterionResult(
                name, False, f"factoring order exceeds the bound at n={rep.n} c={rep.c}"
            )
    for i in range(100):
        n, c = rng.choice([(1, 2), (1, 3), (2, 2)])
        base = random_base(rng)
        rep = reps[(n, c)]
        g = random_jet(rng, n, c, base, kind="K")
        h = random_jet(rng, n, c, base, kind="K")
        lhs = rep_eval(rep, jet_compose(g, h))
        if lhs != matrix_mul(rep_eval(rep, g), rep_eval(rep, h)):
            return CriterionResult(name, False, f"evaluation not multiplicative (case {i})")
    return CriterionResult(
        name,
        True,
        "6 symbolic homomorphism checks; frozen weights and bound; "
        "100 evaluation pairs, exact",
    )


# -- 10: the packaged golden coproduct file -----------------------------------------------------


def golden_coproduct(rng: random.Random) -> CriterionResult:
    name = "golden-coproduct"
    try:
        stored = (
            resources.files("discjet").joinpath(GOLDEN_COPRODUCT).read_text("utf-8")
        )
    except FileNotFoundError:
        return CriterionResult(name, False, "packaged golden coproduct file is missing")
    if stored != render(coproduct_document(1, 4)):
        return CriterionResult(
            name, False, "stored golden coproduct differs from the recomputed table"
        )
    return CriterionResult(
        name, True, "packaged n=1 c=4 coproduct matches the recomputation byte for byte"
    )


# -- the runner ---------------------------------------------------------------------------------


CRITERIA = [
    ("composition-table", composition_table),
    ("coproduct-table", coproduct_table),
    ("coproduct-grading", coproduct_grading),
    ("group-axioms", group_axioms),
    ("quotient-well-definedness", quotient_well_definedness),
    ("hopf-axioms", hopf_axioms),
    ("lie-suite", lie_suite),
    ("roof-suite", roof_suite),
    ("rep-suite", rep_suite),
    ("golden-coproduct", golden_coproduct),
]


def run_all(seed: int) -> list[CriterionResult]:
    results = []
    for name, criterion in CRITERIA:
        rng = random.Random(f"{seed}:{name}")
        try:
            results.append(criterion(rng))
        except Exception as exc:  # a criterion reports, it must never crash the suite
            results.append(
                CriterionResult(name, False, f"raised {type(exc).__name__}: {exc}")
            )
    return results


def render_report(results) -> str:
    lines = [f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}" for r in results]
    good = sum(1 for r in results if r.ok)
    lines.append(f"{good}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
