"""Derivations of the truncated disc and the exp/log correspondence.

A derivation is a vector field ``D = sum_k f_k d/dt_k`` with coefficient
series ``f_k`` truncated at order ``c``.  Fields whose coefficients vanish
at the origin (m-order >= 1) form the Lie algebra of the constant-free jet
group ``K^(c)``: for those, ``apply_derivation`` and the bracket are exact
at order ``c``.  Coefficients with constant terms are supported as stored
representatives, but their degree-``c`` output terms would need degree
``c + 1`` of the input, so the boundary is only as good as the
representative.

``exp_derivation`` sums ``t_k + D(t_k) + D^2(t_k)/2! + ...``; it requires
m-order >= 2, which makes every application raise the degree and the sum
finite (and keeps the result's coefficients rational).  ``log_unipotent``
inverts it degree by degree.
"""

from __future__ import annotations

from fractions import Fraction

from .base_ring import BaseRingDescriptor
from .errors import PreconditionError
from .jet_group import JetAutomorphism, jet_classify, jet_identity, jet_invert
from .series import TruncatedSeries, series_substitute, series_truncate, unit_index


class Derivation:
    """A truncated vector field on the formal n-disc.

    ``coefficients[k]`` is the series ``f_k`` in ``D = sum f_k d/dt_k``,
    held at order ``c``.
    """

    __slots__ = ("n", "c", "base", "coefficients")

    def __init__(self, n: int, c: int, base: BaseRingDescriptor, coefficients):
        if n < 1 or c < 1:
            raise PreconditionError("derivations need n >= 1 and c >= 1")
        coeffs = tuple(coefficients)
        if len(coeffs) != n:
            raise PreconditionError(f"expected {n} coefficient series, got {len(coeffs)}")
        fixed = []
        for k, f in enumerate(coeffs):
            if f.dim != n:
                raise PreconditionError(f"coefficient {k} has dim {f.dim}, expected {n}")
            fixed.append(series_truncate(f, c))
        self.n = n
        self.c = c
        self.base = base
        self.coefficients = tuple(fixed)

    def m_order(self) -> int | None:
        """Least total degree appearing in any coefficient (None when D = 0)."""
        orders = [f.m_order() for f in self.coefficients if f.m_order() is not None]
        return min(orders) if orders else None

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check_same_space(other)
        return Derivation(
            self.n, self.c, self.base,
            [a + b for a, b in zip(self.coefficients, other.coefficients)],
        )

    def __neg__(self) -> "Derivation":
        return Derivation(self.n, self.c, self.base, [-f for f in self.coefficients])

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def scale(self, scalar) -> "Derivation":
        return Derivation(self.n, self.c, self.base, [f.scale(scalar) for f in self.coefficients])

    def _check_same_space(self, other: "Derivation"):
        if self.n != other.n or self.c != other.c or self.base != other.base:
            raise PreconditionError("derivations live in different spaces")

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return (
            self.n == other.n
            and self.c == other.c
            and self.base == other.base
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        raise TypeError("Derivation is not hashable")

    def __repr__(self):
        bits = ", ".join(repr(f) for f in self.coefficients)
        return f"<derivation n={self.n} c={self.c} [{bits}]>"


def derivation_zero(n: int, c: int, base: BaseRingDescriptor) -> Derivation:
    return Derivation(n, c, base, [TruncatedSeries.zero(n, c) for _ in range(n)])


def derivation_monomial(n: int, c: int, base: BaseRingDescriptor, j, k: int, coeff=None) -> Derivation:
    """The field coeff * t^j d/dt_{k+1} (coeff defaults to 1)."""
    coeff = base.one() if coeff is None else coeff
    coeffs = [TruncatedSeries.zero(n, c) for _ in range(n)]
    coeffs[k] = TruncatedSeries(n, c, {tuple(j): coeff})
    return Derivation(n, c, base, coeffs)


def apply_derivation(D: Derivation, f: TruncatedSeries) -> TruncatedSeries:
    """D acting on a function: sum_k f_k * df/dt_k, truncated at order c.

    Exact at every degree <= c when D has m-order >= 1; with constant
    coefficient terms the top degree is representative-level.
    """
    if f.dim != D.n:
        raise PreconditionError(f"function has dim {f.dim}, derivation has {D.n}")
    order = min(f.order, D.c)
    acc = TruncatedSeries.zero(D.n, order)
    for k in range(D.n):
        fk = series_truncate(D.coefficients[k], order)
        df = series_truncate(f, order).partial(k)
        acc = acc + fk * df
    return acc


def derivation_bracket(D: Derivation, E: Derivation) -> Derivation:
    """The commutator [D, E], coefficient-wise D(E_k) - E(D_k)."""
    D._check_same_space(E)
    coeffs = [
        apply_derivation(D, E.coefficients[k]) - apply_derivation(E, D.coefficients[k])
        for k in range(D.n)
    ]
    return Derivation(D.n, D.c, D.base, coeffs)


def exp_derivation(D: Derivation) -> JetAutomorphism:
    """The time-one flow of D as a unipotent jet; needs m-order >= 2.

    Each application of D raises the minimal degree, so the exponential
    series t_k + D(t_k) + D^2(t_k)/2! + ... collapses to a finite sum at
    order c.
    """
    mo = D.m_order()
    if mo is not None and mo < 2:
        raise PreconditionError(
            "exponential needs coefficients vanishing to order >= 2 "
            f"(m-order is {mo})"
        )
    n, c, base = D.n, D.c, D.base
    comps = []
    for k in range(n):
        x = TruncatedSeries(n, c, {unit_index(n, k): base.one()})
        acc, term = x, x
        for i in range(1, c + 1):
            term = apply_derivation(D, term).scale(Fraction(1, i))
            if term.is_zero():
                break
            acc = acc + term
        comps.append(acc)
    return JetAutomorphism(n, c, base, comps)


def log_unipotent(u: JetAutomorphism) -> Derivation:
    """The derivation D with exp(D) = u, for unipotent u (identity linear part).

    Solved degree by degree: the degree-d slice of D is whatever the current
    exponential still misses at degree d.
    """
    if not jet_classify(u).in_K_u:
        raise PreconditionError("logarithm needs a unipotent jet (identity linear part)")
    n, c, base = u.n, u.c, u.base
    target = u.truncated_components(c)
    D = derivation_zero(n, c, base)
    for d in range(2, c + 1):
        have = exp_derivation(D).truncated_components(c)
        coeffs = []
        for k in range(n):
            missing = (target[k] - have[k]).homogeneous_part(d)
            coeffs.append(D.coefficients[k] + TruncatedSeries(n, c, missing))
        D = Derivation(n, c, base, coeffs)
    return D


def adjoint(k: JetAutomorphism, D: Derivation) -> Derivation:
    """The adjoint action of k in K^(c) on Lie K: (Ad_k D)_j = D(k_j) o k^{-1}.

    Requires k constant-free and D with m-order >= 1, where the formula is
    exact at order c; satisfies exp(Ad_k D) = k o exp(D) o k^{-1}.
    """
    if k.n != D.n or k.c != D.c or k.base != D.base:
        raise PreconditionError("jet and derivation live over different discs")
    if not jet_classify(k).in_K:
        raise PreconditionError("adjoint action needs a constant-free jet")
    mo = D.m_order()
    if mo is not None and mo < 1:
        raise PreconditionError("adjoint action needs coefficients with m-order >= 1")
    c = D.c
    kinv = jet_invert(k)
    kinv_c = kinv.truncated_components(c)
    coeffs = []
    for j in range(k.n):
        s = apply_derivation(D, series_truncate(k.components[j], c))
        coeffs.append(series_substitute(s, kinv_c, work_order=c))
    return Derivation(D.n, c, D.base, coeffs)
