"""Exact coefficient rings for jet arithmetic.

The rings implemented here are truncated polynomial rings

    R = Q[eps_1, ..., eps_m] / (eps_1^{N_1}, ..., eps_m^{N_m}),

i.e. the rationals extended by finitely many commuting nilpotent generators,
with every ``N_i >= 2``.  Elements are stored as sparse dictionaries mapping
exponent vectors to ``fractions.Fraction`` coefficients, so all arithmetic is
exact.  A monomial in which any ``eps_i`` appears with exponent ``>= N_i`` is
identically zero and is dropped on the spot.

An element is a unit exactly when its rational part (the coefficient of the
empty monomial) is nonzero, and nilpotent exactly when the rational part is
zero.  Units are inverted with the finite geometric series

    (c (1 + eta))^{-1} = c^{-1} (1 - eta + eta^2 - ...),

which terminates because every product of ``nu = 1 + sum_i (N_i - 1)``
nilpotents vanishes.  ``nu`` is the nilpotency index of the ring: the least
``k`` with ``Nil(R)^k = 0``.

A second, *symbolic* mode replaces the nilpotent generators by named free
commuting generators (no truncation at all).  It exists so that jet
compositions can be carried out with indeterminate coefficients; in that mode
the nilradical is zero (nilpotency index 1), only nonzero rationals are
units, and the two modes never mix inside one ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import PreconditionError

Rat = Union[int, Fraction]

#: exponent vector over the generators of the ring
EpsExponent = tuple[int, ...]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an integer or Fraction, got {type(x).__name__}")


def grlex_key(exponent: tuple[int, ...]) -> tuple:
    """Graded-lexicographic sort key: total degree first, then earlier
    generators dominate (within one degree, (1,0) precedes (0,1))."""
    return (sum(exponent), tuple(-e for e in exponent))


@dataclass(frozen=True)
class BaseRingDescriptor:
    """Shape of a coefficient ring.

    ``orders`` lists the truncation orders ``N_i >= 2`` of the nilpotent
    generators; ``symbolic_names`` lists named free generators instead.  At
    most one of the two may be nonempty.  ``orders == () == symbolic_names``
    is plain Q.
    """

    orders: tuple[int, ...] = ()
    symbolic_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.orders and self.symbolic_names:
            raise PreconditionError("a base ring is nilpotent or symbolic, not both")
        for N in self.orders:
            if not isinstance(N, int) or N < 2:
                raise PreconditionError(f"nilpotent order must be an integer >= 2, got {N!r}")
        seen = set()
        for name in self.symbolic_names:
            if not name or not isinstance(name, str):
                raise PreconditionError("symbolic generator names must be nonempty strings")
            if name in seen:
                raise PreconditionError(f"duplicate symbolic generator name {name!r}")
            seen.add(name)

    @property
    def num_generators(self) -> int:
        return len(self.orders) if self.orders else len(self.symbolic_names)

    @property
    def is_symbolic(self) -> bool:
        return bool(self.symbolic_names)

    @property
    def is_rational(self) -> bool:
        return not self.orders and not self.symbolic_names

    # -- element constructors ------------------------------------------------

    def zero(self) -> "BaseRingElement":
        return BaseRingElement(self, {})

    def one(self) -> "BaseRingElement":
        return self.rational(1)

    def rational(self, q: Rat) -> "BaseRingElement":
        q = _as_fraction(q)
        m = self.num_generators
        return BaseRingElement(self, {(0,) * m: q} if q else {})

    def generator(self, i: int) -> "BaseRingElement":
        """The i-th generator (0-based), nilpotent or symbolic depending on mode."""
        m = self.num_generators
        if not 0 <= i < m:
            raise PreconditionError(f"generator index {i} out of range for {m} generators")
        exp = tuple(1 if j == i else 0 for j in range(m))
        return BaseRingElement(self, {exp: Fraction(1)})

    def element(self, terms: Mapping[EpsExponent, Rat]) -> "BaseRingElement":
        """Build an element from an {exponent vector: coefficient} mapping."""
        return BaseRingElement(self, {tuple(e): _as_fraction(q) for e, q in terms.items()})


class BaseRingElement:
    """A sparse exact element of a :class:`BaseRingDescriptor` ring.

    Instances are immutable by convention; all operations return new elements
    with canonically reduced term dictionaries (no zero coefficients, no
    monomials killed by the truncation orders).
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: BaseRingDescriptor, terms: Mapping[EpsExponent, Fraction]):
        self.ring = ring
        m = ring.num_generators
        reduced: dict[EpsExponent, Fraction] = {}
        for exp, q in terms.items():
            if len(exp) != m:
                raise PreconditionError(
                    f"exponent vector {exp} has length {len(exp)}, ring has {m} generators"
                )
            if any(e < 0 for e in exp):
                raise PreconditionError(f"negative exponent in {exp}")
            if ring.orders and any(e >= N for e, N in zip(exp, ring.orders)):
                continue  # the monomial is zero in the quotient
            if q:
                reduced[exp] = q
        self.terms = reduced

    # -- queries ---------------------------------------------------------

    def rational_part(self) -> Fraction:
        """Coefficient of the empty monomial."""
        m = self.ring.num_generators
        return self.terms.get((0,) * m, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def is_nilpotent(self) -> bool:
        """Whether some power of the element vanishes.

        In nilpotent mode this is ``rational_part == 0``; with free symbolic
        generators the nilradical is zero, so only 0 itself qualifies.
        """
        if self.ring.is_symbolic:
            return self.is_zero()
        return self.rational_part() == 0

    def is_unit(self) -> bool:
        if self.ring.is_symbolic:
            return self.is_rational() and not self.is_zero()
        return self.rational_part() != 0

    # -- arithmetic --------------------------------------------------------

    def _check_same_ring(self, other: "BaseRingElement"):
        if self.ring != other.ring:
            raise PreconditionError("elements live in different base rings")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_ring(other)
        terms = dict(self.terms)
        for exp, q in other.terms.items():
            s = terms.get(exp, Fraction(0)) + q
            if s:
                terms[exp] = s
            else:
                terms.pop(exp, None)
        return BaseRingElement(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return BaseRingElement(self.ring, {e: -q for e, q in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_ring(other)
        orders = self.ring.orders
        out: dict[EpsExponent, Fraction] = {}
        for e1, q1 in self.terms.items():
            for e2, q2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                if orders and any(e >= N for e, N in zip(exp, orders)):
                    continue
                s = out.get(exp, Fraction(0)) + q1 * q2
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        return BaseRingElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PreconditionError("ring powers take a nonnegative integer exponent")
        result = self.ring.one()
        square = self
        while k:
            if k & 1:
                result = result * square
            k >>= 1
            if k:
                square = square * square
        return result

    def _coerce(self, other):
        if isinstance(other, BaseRingElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.rational(other)
        return NotImplemented

    def invert(self) -> "BaseRingElement":
        """Multiplicative inverse; requires the element to be a unit."""
        if not self.is_unit():
            raise PreconditionError("cannot invert a non-unit (rational part is zero)")
        c = self.rational_part()
        eta = self * (1 / c) - 1  # self = c * (1 + eta) with eta nilpotent
        nu = nilpotency_index(self.ring)
        acc = self.ring.one()
        power = self.ring.one()
        for _ in range(1, nu):
            power = power * (-eta)
            if power.is_zero():
                break
            acc = acc + power
        return acc * (1 / c)

    # -- housekeeping ------------------------------------------------------

    def sorted_terms(self) -> list[tuple[EpsExponent, Fraction]]:
        """Terms in graded-lexicographic order (the canonical order everywhere)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.rational(other)
        if not isinstance(other, BaseRingElement):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __repr__(self):
        if self.is_zero():
            return "0"
        names = self.ring.symbolic_names or tuple(
            f"e{i+1}" for i in range(self.ring.num_generators)
        )
        parts = []
        for exp, q in self.sorted_terms():
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(exp) if e
            )
            parts.append(f"{q}*{mono}" if mono else str(q))
        return " + ".join(parts)


# -- module-level operations -------------------------------------------------


def ring_arith(a: BaseRingElement, b: BaseRingElement, op: str) -> BaseRingElement:
    """Exact ``+``, ``-`` or ``*`` on two elements of the same ring."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise PreconditionError(f"unknown ring operation {op!r}")


def ring_invert(a: BaseRingElement) -> BaseRingElement:
    """Inverse of a unit; raises :class:`PreconditionError` on non-units."""
    return a.invert()


def nilpotency_index(d: BaseRingDescriptor) -> int:
    """Least ``nu`` with ``Nil(R)^nu = 0``: ``1 + sum_i (N_i - 1)``; 1 when the ring is reduced."""
    if d.is_symbolic or d.is_rational:
        return 1
    return 1 + sum(N - 1 for N in d.orders)
