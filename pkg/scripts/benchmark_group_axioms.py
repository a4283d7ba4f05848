#!/usr/bin/env python3
"""Time the group-axiom triple checks per (n, c, base) configuration.

Each triple costs 7 composes and 1 inversion (associativity both ways,
identity on rho, inverse on sigma) — the same work the `group-axioms`
selftest criterion does 200 times per configuration.  Use this to judge
whether a configuration fits the 30-second budget before adding it to
``discjet.acceptance.GROUP_AXIOM_GRID``.
"""

import argparse
import random
import time

from discjet.acceptance import GROUP_AXIOM_GRID
from discjet.base_ring import BaseRingDescriptor
from discjet.jet_group import jet_compose, jet_identity, jet_invert
from discjet.sampling import random_jet


def time_config(rng, n, c, orders, triples):
    base = BaseRingDescriptor(orders=orders)
    e = jet_identity(n, c, base)
    start = time.perf_counter()
    for _ in range(triples):
        rho = random_jet(rng, n, c, base, kind="G")
        sigma = random_jet(rng, n, c, base, kind="G")
        gamma = random_jet(rng, n, c, base, kind="G")
        assert jet_compose(jet_compose(rho, sigma), gamma) == jet_compose(
            rho, jet_compose(sigma, gamma)
        )
        assert jet_compose(rho, e) == rho == jet_compose(e, rho)
        inv = jet_invert(sigma)
        assert jet_compose(sigma, inv) == e == jet_compose(inv, sigma)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--triples", type=int, default=20, help="triples per configuration")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    total = 0.0
    for n, c, orders in GROUP_AXIOM_GRID:
        took = time_config(rng, n, c, orders, args.triples)
        total += took
        per = 1000 * took / args.triples
        print(f"n={n} c={c} orders={list(orders)}: {per:7.1f} ms/triple "
              f"(projected {per * 0.2:6.1f} s for 200)")
    print(f"total for {args.triples} triples/config: {total:.1f} s")


if __name__ == "__main__":
    main()
