"""Groups of truncated automorphisms of the formal n-disc.

An order-``c`` jet of an automorphism of the formal disc over a coefficient
ring ``R`` (with nilpotents) is a tuple of ``n`` series in ``t_1..t_n``
whose constant terms are nilpotent and whose linear part is an invertible
matrix over ``R``.  Composition is substitution; ``G^(c)(R)`` denotes the
group of such jets up to agreement at total degree ``<= c``.

Working precision
-----------------
Truncating compositions at ``c`` on the nose is *not* associative once ``R``
has nilpotents: a dropped degree-``c+1`` term can be pushed back down to
degree ``c`` by a later nilpotent translation (conjugating ``t + u t^{c+1}``
by ``t - e`` produces ``(c+1) u e t^c``).  Each push-down costs at least one
nilpotent factor, so carrying ``nu - 1`` extra degrees -- ``nu`` the
nilpotency index of ``R`` -- is enough: junk that would re-enter at degree
``<= c`` arrives multiplied by ``nu`` nilpotents and dies.

:class:`JetAutomorphism` therefore stores its components at the working
order ``w = c + nu - 1`` and all group operations compute at order ``w``.
Stored degree-``d`` data is exact for ``d <= c``; for ``c < d <= w`` it is a
representative, correct modulo ``Nil(R)^{w+1-d}``.  Group equality
(``==`` and :func:`jets_c_equivalent`) compares orders ``<= c`` only, and
serialization canonicalizes to order ``c``.

For jets with zero constant term (the subgroup ``K``) nothing above order
``c`` ever matters and every operation is plainly exact at ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .base_ring import BaseRingDescriptor, BaseRingElement, nilpotency_index, ring_invert
from .errors import PreconditionError
from .series import (
    TruncatedSeries,
    matrix_adjugate,
    matrix_determinant,
    reverse_composition,
    series_substitute,
    series_truncate,
    unit_index,
)


class JetAutomorphism:
    """An element of ``G^(c)(R)``: an order-``c`` disc-jet with invertible linear part.

    ``components[k]`` is the series image of ``t_{k+1}``, stored at the
    working order ``c + nu - 1``.  Two jets are equal iff they agree at all
    total degrees ``<= c``; terms above ``c`` are internal bookkeeping.
    """

    __slots__ = ("n", "c", "base", "work_order", "components")

    def __init__(self, n: int, c: int, base: BaseRingDescriptor, components):
        if n < 1:
            raise PreconditionError("jets need at least one disc variable")
        if c < 1:
            raise PreconditionError("jet order c must be >= 1")
        self.n = n
        self.c = c
        self.base = base
        self.work_order = c + nilpotency_index(base) - 1
        comps = tuple(components)
        if len(comps) != n:
            raise PreconditionError(f"expected {n} components, got {len(comps)}")
        fixed = []
        for k, comp in enumerate(comps):
            if comp.dim != n:
                raise PreconditionError(f"component {k} has dim {comp.dim}, expected {n}")
            fixed.append(series_truncate(comp, self.work_order))
        self.components = tuple(fixed)
        self._validate()

    def _validate(self):
        for k, comp in enumerate(self.components):
            const = comp.constant_term()
            if const is not None and not const.is_nilpotent():
                raise PreconditionError(
                    f"component {k} has a non-nilpotent constant term"
                )
        det = matrix_determinant(self.linear_matrix())
        if not det.is_unit():
            raise PreconditionError("linear part has a non-unit determinant")

    # -- views -------------------------------------------------------------

    def linear_matrix(self) -> list[list[BaseRingElement]]:
        """L[k][l] = coefficient of t_{l+1} in component k (zero when absent)."""
        zero = self.base.zero()
        L = []
        for comp in self.components:
            row = []
            for l in range(self.n):
                c = comp.coefficient(unit_index(self.n, l))
                row.append(zero if c is None else c)
            L.append(row)
        return L

    def constant_terms(self) -> tuple[BaseRingElement, ...]:
        zero = self.base.zero()
        out = []
        for comp in self.components:
            c = comp.constant_term()
            out.append(zero if c is None else c)
        return tuple(out)

    def truncated_components(self, order: int) -> tuple[TruncatedSeries, ...]:
        return tuple(series_truncate(comp, order) for comp in self.components)

    def __eq__(self, other):
        if not isinstance(other, JetAutomorphism):
            return NotImplemented
        return (
            self.n == other.n
            and self.c == other.c
            and self.base == other.base
            and self.truncated_components(self.c) == other.truncated_components(self.c)
        )

    def __hash__(self):
        raise TypeError("JetAutomorphism is not hashable")

    def __repr__(self):
        comps = ", ".join(repr(series_truncate(c, self.c)) for c in self.components)
        return f"<jet n={self.n} c={self.c} [{comps}]>"


# -- constructors ----------------------------------------------------------------


def jet_identity(n: int, c: int, base: BaseRingDescriptor) -> JetAutomorphism:
    """The identity of G^(c): t_k -> t_k."""
    comps = [
        TruncatedSeries(n, c, {unit_index(n, k): base.one()}) for k in range(n)
    ]
    return JetAutomorphism(n, c, base, comps)


def jet_translation(n: int, c: int, base: BaseRingDescriptor, a) -> JetAutomorphism:
    """t_k -> a_k + t_k for a tuple of nilpotent elements a."""
    a = tuple(a)
    if len(a) != n:
        raise PreconditionError(f"translation needs {n} entries, got {len(a)}")
    comps = []
    for k in range(n):
        terms = {unit_index(n, k): base.one()}
        if not a[k].is_zero():
            terms[(0,) * n] = a[k]
        comps.append(TruncatedSeries(n, c, terms))
    return JetAutomorphism(n, c, base, comps)


def jet_scaling(n: int, c: int, base: BaseRingDescriptor, z) -> JetAutomorphism:
    """t_k -> z * t_k for a unit z (given as element, int or Fraction)."""
    if isinstance(z, (int, Fraction)):
        z = base.rational(z)
    comps = [
        TruncatedSeries(n, c, {unit_index(n, k): z}) for k in range(n)
    ]
    return JetAutomorphism(n, c, base, comps)


def jet_from_terms(n: int, c: int, base: BaseRingDescriptor, comps_terms) -> JetAutomorphism:
    """Build a jet from per-component {multi-index: coefficient} mappings.

    Coefficients may be ring elements or ints/Fractions (coerced).  Terms
    above degree c are kept as far as the working order allows, so callers
    can hand in explicit higher-degree representatives.
    """
    comps = []
    hold = c
    for terms in comps_terms:
        for j in terms:
            hold = max(hold, sum(j))
    for terms in comps_terms:
        fixed = {}
        for j, coeff in terms.items():
            if isinstance(coeff, (int, Fraction)):
                coeff = base.rational(coeff)
            fixed[tuple(j)] = coeff
        comps.append(TruncatedSeries(n, hold, fixed))
    return JetAutomorphism(n, c, base, comps)


# -- group operations --------------------------------------------------------------


def _check_same_group(g: JetAutomorphism, h: JetAutomorphism):
    if g.n != h.n or g.c != h.c or g.base != h.base:
        raise PreconditionError("jets live in different groups (n, c or base differ)")


def jet_compose(rho: JetAutomorphism, sigma: JetAutomorphism) -> JetAutomorphism:
    """The composite jet of rho after sigma: t -> rho(sigma(t)).

    Computed at the working order, so chains of compositions agree with the
    exact composite at every degree <= c.
    """
    _check_same_group(rho, sigma)
    w = rho.work_order
    comps = [
        series_substitute(comp, sigma.components, work_order=w)
        for comp in rho.components
    ]
    return JetAutomorphism(rho.n, rho.c, rho.base, comps)


def jet_invert(g: JetAutomorphism) -> JetAutomorphism:
    """The inverse jet: two-sided inverse of g in G^(c)(R).

    Splits g = (translation by a) o k with k constant-free, reverts k degree
    by degree at the working order, then precomposes with the translation by
    -a, i.e. g^{-1}(t) = k^{-1}(t - a).
    """
    n, w, base = g.n, g.work_order, g.base
    a = g.constant_terms()
    zero_j = (0,) * n
    k_comps = []
    for comp in g.components:
        terms = dict(comp.terms)
        terms.pop(zero_j, None)
        k_comps.append(TruncatedSeries(n, w, terms))

    L = g.linear_matrix()
    det = matrix_determinant(L)
    if not det.is_unit():
        raise PreconditionError("linear part has a non-unit determinant")
    det_inv = ring_invert(det)
    adj = matrix_adjugate(L, base.one())
    Linv = [[adj[i][j] * det_inv for j in range(n)] for i in range(n)]

    v = reverse_composition(k_comps, Linv, w)

    if all(ak.is_zero() for ak in a):
        inv_comps = v
    else:
        shift = []
        for j in range(n):
            terms = {unit_index(n, j): base.one()}
            if not a[j].is_zero():
                terms[zero_j] = -a[j]
            shift.append(TruncatedSeries(n, w, terms))
        inv_comps = [series_substitute(vk, shift, work_order=w) for vk in v]
    return JetAutomorphism(g.n, g.c, base, inv_comps)


# -- classification and splittings ---------------------------------------------------


@dataclass(frozen=True)
class JetClassification:
    """Membership flags for the standard subgroups of G^(c).

    ``n_levels[i]`` says whether the jet lies in the level-``i+1`` kernel
    N_{i+1} (agrees with the identity at all degrees <= i+1), for
    i+1 = 1..c.
    """

    in_G: bool
    in_K: bool
    in_K_u: bool
    n_levels: tuple[bool, ...]


def jet_classify(g: JetAutomorphism) -> JetClassification:
    consts = g.constant_terms()
    in_G = all(x.is_nilpotent() for x in consts) and matrix_determinant(
        g.linear_matrix()
    ).is_unit()
    in_K = all(x.is_zero() for x in consts)
    one, zero = g.base.one(), g.base.zero()
    L = g.linear_matrix()
    linear_is_id = all(
        L[i][j] == (one if i == j else zero) for i in range(g.n) for j in range(g.n)
    )
    in_K_u = in_K and linear_is_id
    ident = jet_identity(g.n, g.c, g.base)
    n_levels = tuple(
        jets_c_equivalent(g, ident, cp) for cp in range(1, g.c + 1)
    )
    return JetClassification(in_G, in_K, in_K_u, n_levels)


def split_translation(g: JetAutomorphism):
    """g = (translation by a) o k with k in K; returns (a, k)."""
    a = g.constant_terms()
    zero_j = (0,) * g.n
    comps = []
    for comp in g.components:
        terms = dict(comp.terms)
        terms.pop(zero_j, None)
        comps.append(TruncatedSeries(g.n, g.work_order, terms))
    return a, JetAutomorphism(g.n, g.c, g.base, comps)


def split_linear_unipotent(k: JetAutomorphism):
    """k = A o u with A linear and u unipotent (identity linear part).

    Requires k in K (no constant terms).
    """
    if not jet_classify(k).in_K:
        raise PreconditionError("linear/unipotent splitting needs a constant-free jet")
    n, c, base = k.n, k.c, k.base
    L = k.linear_matrix()
    A_comps = []
    for i in range(n):
        terms = {}
        for j in range(n):
            if not L[i][j].is_zero():
                terms[unit_index(n, j)] = L[i][j]
        A_comps.append(TruncatedSeries(n, c, terms))
    A = JetAutomorphism(n, c, base, A_comps)
    u = jet_compose(jet_invert(A), k)
    return A, u


def jets_c_equivalent(g: JetAutomorphism, h: JetAutomorphism, c_prime: int) -> bool:
    """Whether g and h agree at all total degrees <= c_prime."""
    if g.n != h.n or g.base != h.base:
        raise PreconditionError("jets over different discs cannot be compared")
    if not 1 <= c_prime <= min(g.c, h.c):
        raise PreconditionError(
            f"comparison order {c_prime} outside 1..{min(g.c, h.c)}"
        )
    return g.truncated_components(c_prime) == h.truncated_components(c_prime)
