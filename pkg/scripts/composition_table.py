#!/usr/bin/env python3
"""Print the symbolic composition and coproduct tables for the 1-disc at order 4.

Composition is computed over the base ring Q[r2, r3, r4, s2, s3, s4]: the
coefficients of (rho o sigma)(t) come out as exact polynomial identities.
The coproduct rows are then shown in the unipotent chart (a_1 = 1).
"""

from discjet.base_ring import BaseRingDescriptor
from discjet.hopf import Polynomial, coproduct
from discjet.jet_group import jet_compose, jet_from_terms


def main():
    base = BaseRingDescriptor(symbolic_names=("r2", "r3", "r4", "s2", "s3", "s4"))
    r2, r3, r4, s2, s3, s4 = (base.generator(i) for i in range(6))
    rho = jet_from_terms(1, 4, base, [{(1,): 1, (2,): r2, (3,): r3, (4,): r4}])
    sigma = jet_from_terms(1, 4, base, [{(1,): 1, (2,): s2, (3,): s3, (4,): s4}])
    comp = jet_compose(rho, sigma).truncated_components(4)[0]

    print("rho   = t + r2 t^2 + r3 t^3 + r4 t^4")
    print("sigma = t + s2 t^2 + s3 t^3 + s4 t^4")
    print()
    print("rho o sigma:")
    for j in range(1, 5):
        print(f"  t^{j}: {comp.coefficient((j,))!r}")

    print()
    print("coproduct in the unipotent chart (a_1 = 1):")
    table = coproduct(1, 4)
    for j in range(2, 5):
        row = table[(0, (j,))].substitute(
            lambda v: Polynomial.constant(1) if v[2] == (1,) else None
        )
        print(f"  Delta(a_{j}) = {row}")


if __name__ == "__main__":
    main()
