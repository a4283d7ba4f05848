"""Exact jet groups of the formal n-disc.

Truncated automorphism groups of Q-coefficient formal power series in n
variables over rings with nilpotents, the Hopf-algebra structure of the
coordinate ring of the constant-free subgroup, its Lie algebra, jets of
etale chart pairs (roofs), and the matrix representations obtained by
letting jets act on truncated function spaces.
"""

from .errors import PreconditionError, SchemaError

__all__ = ["PreconditionError", "SchemaError"]

__version__ = "0.1.0"
