"""Polynomial chart pairs (roofs) and the jets they induce.

A *roof* is a pair of etale-at-a-point polynomial maps out of one source
chart,

    phi : (W, w) -> V        psi : (W, w) -> V',

stored as honest (untruncated) polynomial maps plus the basepoint ``w``.
Etale-at-``w`` means the Jacobian is invertible there; both legs must also
carry ``w`` into the formal neighbourhood of the origin (nilpotent image
entries).  Such a pair identifies the formal neighbourhood of ``phi(w)``
with that of ``psi(w)``; its *jet*

    omega = jet(psi) o jet(phi)^{-1}

is the change-of-coordinates element of ``G^(c)``, where ``jet(f)`` is the
Taylor expansion ``f(w + t)``.  The jet is strict (constant-free, in
``K^(c)``) exactly when both legs vanish at ``w`` on the nose.

Everything downstream of the Taylor expansion is plain jet-group
arithmetic; the expansions themselves are computed exactly, so the working
order of the group carries through with no extra error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .base_ring import BaseRingDescriptor, BaseRingElement
from .errors import PreconditionError
from .jet_group import JetAutomorphism, jet_compose, jet_invert
from .series import (
    TruncatedSeries,
    _substitute_exact,
    series_truncate,
    unit_index,
)


class PolyMap:
    """An exact polynomial self-map of affine n-space over a base ring.

    ``components[k]`` maps multi-indices to coefficients; nothing is ever
    truncated.
    """

    __slots__ = ("n", "base", "components")

    def __init__(self, n: int, base: BaseRingDescriptor, components):
        if n < 1:
            raise PreconditionError("polynomial maps need n >= 1")
        comps = tuple(components)
        if len(comps) != n:
            raise PreconditionError(f"expected {n} components, got {len(comps)}")
        fixed = []
        for terms in comps:
            clean = {}
            for j, coeff in terms.items():
                j = tuple(j)
                if len(j) != n or any(e < 0 for e in j):
                    raise PreconditionError(f"bad multi-index {j} for dim {n}")
                if isinstance(coeff, (int, Fraction)):
                    coeff = base.rational(coeff)
                if not coeff.is_zero():
                    clean[j] = coeff
            fixed.append(clean)
        self.n = n
        self.base = base
        self.components = tuple(fixed)

    def degree(self) -> int:
        """Maximal total degree over all components (0 for constants)."""
        degs = [sum(j) for terms in self.components for j in terms]
        return max(degs, default=0)

    def evaluate(self, point) -> tuple[BaseRingElement, ...]:
        """Exact value at a tuple of base-ring elements."""
        point = tuple(point)
        if len(point) != self.n:
            raise PreconditionError(f"point has {len(point)} entries, expected {self.n}")
        out = []
        for terms in self.components:
            acc = self.base.zero()
            for j, coeff in terms.items():
                term = coeff
                for x, e in zip(point, j):
                    term = term * x**e
                acc = acc + term
            out.append(acc)
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.n == other.n and self.base == other.base and self.components == other.components

    def __hash__(self):
        raise TypeError("PolyMap is not hashable")

    def __repr__(self):
        return f"<polymap n={self.n} degree={self.degree()}>"


def polymap_identity(n: int, base: BaseRingDescriptor) -> PolyMap:
    return PolyMap(
        n, base, [{unit_index(n, k): base.one()} for k in range(n)]
    )


def polymap_from_jet(g: JetAutomorphism, order: int | None = None) -> PolyMap:
    """Zero-lift of a jet's components (truncated at ``order``, default c)."""
    order = g.c if order is None else order
    comps = []
    for comp in g.truncated_components(order):
        comps.append(dict(comp.terms))
    return PolyMap(g.n, g.base, comps)


def poly_map_compose_exact(f: PolyMap, g: PolyMap) -> PolyMap:
    """The exact composite t -> f(g(t)); degrees multiply, nothing is dropped."""
    if f.n != g.n or f.base != g.base:
        raise PreconditionError("polynomial maps do not compose (n or base differ)")
    D = max(1, f.degree() * g.degree())
    gs = [TruncatedSeries(g.n, D, terms) for terms in g.components]
    out = []
    for terms in f.components:
        fk = TruncatedSeries(f.n, D, terms)
        out.append(dict(_substitute_exact(fk, gs, work_order=D).terms))
    return PolyMap(f.n, f.base, out)


def jet_at(f: PolyMap, w, order: int) -> tuple[TruncatedSeries, ...]:
    """Taylor expansion ``f(w + t)`` truncated at ``order``.

    The expansion is exact polynomial arithmetic (the substitution inputs
    ``w_k + t_k`` are honest polynomials, the basepoint entries may be any
    ring elements), truncated only at the end.
    """
    w = tuple(w)
    if len(w) != f.n:
        raise PreconditionError(f"basepoint has {len(w)} entries, expected {f.n}")
    D = max(order, f.degree(), 1)
    shifts = []
    for k in range(f.n):
        terms = {unit_index(f.n, k): f.base.one()}
        if not w[k].is_zero():
            terms[(0,) * f.n] = w[k]
        shifts.append(TruncatedSeries(f.n, D, terms))
    out = []
    for terms in f.components:
        fk = TruncatedSeries(f.n, D, terms)
        expanded = _substitute_exact(fk, shifts, work_order=D)
        out.append(series_truncate(expanded, order))
    return tuple(out)


def jacobian_at(f: PolyMap, w) -> list[list[BaseRingElement]]:
    """The matrix of first partials of f at w."""
    linear = jet_at(f, w, 1)
    zero = f.base.zero()
    M = []
    for comp in linear:
        row = []
        for l in range(f.n):
            c = comp.coefficient(unit_index(f.n, l))
            row.append(zero if c is None else c)
        M.append(row)
    return M


@dataclass(frozen=True)
class RoofChart:
    """Two etale legs out of one pointed source chart.

    Invariants (checked on construction): both legs share n and base, both
    carry w into the formal neighbourhood of the origin (nilpotent entries),
    and both Jacobians at w are invertible.
    """

    phi: PolyMap
    psi: PolyMap
    w: tuple[BaseRingElement, ...]

    def __post_init__(self):
        if self.phi.n != self.psi.n or self.phi.base != self.psi.base:
            raise PreconditionError("roof legs live on different charts")
        object.__setattr__(self, "w", tuple(self.w))
        if len(self.w) != self.phi.n:
            raise PreconditionError("basepoint length does not match the legs")
        for name, leg in (("phi", self.phi), ("psi", self.psi)):
            for k, val in enumerate(leg.evaluate(self.w)):
                if not val.is_nilpotent():
                    raise PreconditionError(
                        f"leg {name} sends the basepoint outside the formal disc "
                        f"(component {k} has a non-nilpotent value)"
                    )

    @property
    def n(self) -> int:
        return self.phi.n

    @property
    def base(self) -> BaseRingDescriptor:
        return self.phi.base


def roof_jet(roof: RoofChart, c: int) -> JetAutomorphism:
    """The change-of-coordinates jet of the roof: jet(psi) o jet(phi)^{-1}.

    Both Taylor expansions are computed at the group's working order, so the
    result is the exact class in G^(c).
    """
    if c < 1:
        raise PreconditionError("jet order c must be >= 1")
    from .base_ring import nilpotency_index

    n, base = roof.n, roof.base
    work = c + nilpotency_index(base) - 1
    try:
        A = JetAutomorphism(n, c, base, jet_at(roof.phi, roof.w, work))
    except PreconditionError as err:
        raise PreconditionError(f"leg phi is not etale at the basepoint: {err}") from None
    try:
        B = JetAutomorphism(n, c, base, jet_at(roof.psi, roof.w, work))
    except PreconditionError as err:
        raise PreconditionError(f"leg psi is not etale at the basepoint: {err}") from None
    return jet_compose(B, jet_invert(A))


def roof_mirror(roof: RoofChart) -> RoofChart:
    """Swap the legs; the mirror's jet is the inverse jet."""
    return RoofChart(roof.psi, roof.phi, roof.w)


def roof_is_strict(roof: RoofChart) -> bool:
    """Whether both legs vanish exactly at the basepoint.

    Strict roofs are exactly those whose jet is constant-free (lies in K).
    """
    return all(v.is_zero() for v in roof.phi.evaluate(roof.w)) and all(
        v.is_zero() for v in roof.psi.evaluate(roof.w)
    )


def roof_restrict(roof: RoofChart, g: PolyMap, w_new) -> RoofChart:
    """Precompose both legs with a chart map g taking w_new to the basepoint.

    Requires g(w_new) = w exactly and g etale at w_new; the restricted
    roof induces the same jet.
    """
    w_new = tuple(w_new)
    if g.n != roof.n or g.base != roof.base:
        raise PreconditionError("restriction map lives on a different chart")
    image = g.evaluate(w_new)
    if any(x != y for x, y in zip(image, roof.w)):
        raise PreconditionError("restriction map must send the new basepoint to the old one exactly")
    from .series import matrix_determinant

    if not matrix_determinant(jacobian_at(g, w_new)).is_unit():
        raise PreconditionError("restriction map is not etale at the new basepoint")
    return RoofChart(
        poly_map_compose_exact(roof.phi, g),
        poly_map_compose_exact(roof.psi, g),
        w_new,
    )


def roof_compose_shared(first: RoofChart, second: RoofChart) -> RoofChart:
    """Composite of two roofs whose middle legs literally agree.

    ``first = (phi, chi)`` and ``second = (chi, psi)`` over the same pointed
    source produce ``(phi, psi)``; the jets compose in the same (reversed)
    order: jet(composite) = jet(second) o jet(first).
    """
    if first.psi != second.phi:
        raise PreconditionError("roofs do not share their middle leg")
    if len(first.w) != len(second.w) or any(
        x != y for x, y in zip(first.w, second.w)
    ):
        raise PreconditionError("roofs are based at different points")
    return RoofChart(first.phi, second.psi, first.w)


def roof_from_jet(g: JetAutomorphism) -> RoofChart:
    """A witness roof inducing the given jet: identity leg against the
    zero-lift of the jet's components, based at the origin."""
    n, base = g.n, g.base
    origin = tuple(base.zero() for _ in range(n))
    return RoofChart(polymap_identity(n, base), polymap_from_jet(g), origin)
