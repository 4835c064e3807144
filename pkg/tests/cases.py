"""Shared enumerations of small groups and forms for the test-suite."""

import itertools
from functools import lru_cache
from math import gcd

import numpy as np

from tymtc.abelian import make_group
from tymtc.errors import TymtcError
from tymtc.forms import bicharacter_from_exponents, automorphisms_preserving


def invariant_factor_lists(n: int) -> list[tuple[int, ...]]:
    """Every abelian group of order n as its invariant factors."""
    out = []

    def rec(rest, chain):
        if rest == 1:
            out.append(tuple(chain))
            return
        # build the chain from the top: last factor is divisible by all earlier ones
        for d in range(2, rest + 1):
            if rest % d == 0 and (not chain or chain[0] % d == 0):
                rec(rest // d, [d] + chain)

    rec(n, [])
    return sorted({make_group(f).invariant_factors for f in out})


def groups_up_to(N: int):
    yield make_group([])
    for n in range(2, N + 1):
        for f in invariant_factor_lists(n):
            yield make_group(f)


@lru_cache(maxsize=None)
def _all_forms(factors: tuple) -> tuple:
    g = make_group(factors)
    k = g.rank
    if k == 0:
        return (bicharacter_from_exponents(g, []),)
    f = g.invariant_factors
    slots = [(i, j) for i in range(k) for j in range(i, k)]
    ranges = [range(gcd(f[i], f[j])) for i, j in slots]
    found = []
    for vals in itertools.product(*ranges):
        B = np.zeros((k, k), dtype=np.int64)
        for (i, j), v in zip(slots, vals):
            B[i, j] = B[j, i] = v
        try:
            chi = bicharacter_from_exponents(g, B)
        except TymtcError:
            continue
        if chi.is_nondegenerate:
            found.append(chi)
    return tuple(found)


def nondegenerate_forms(g) -> list:
    """All nondegenerate symmetric bicharacters on g, from all gram matrices."""
    return list(_all_forms(g.invariant_factors))


def isometry_classes(g) -> list:
    """One bicharacter per isometry class, by orbit reduction under Aut(A)."""
    forms = nondegenerate_forms(g)
    if not forms:
        return []
    reps = []
    for chi in forms:
        if not any(_isometric(chi, r) for r in reps):
            reps.append(chi)
    return reps


def _isometric(a, b) -> bool:
    # a ~ b iff some additive bijection carries a to b; search generator images directly
    g = a.group
    if a.order != b.order:
        return False
    gens = g.generators()
    els = g.elements
    cand = [[y for y in els if g.order_of(y) == g.order_of(x)] for x in gens]
    for images in itertools.product(*cand):
        perm = []
        for x in els:
            y = g.zero()
            for c, im in zip(x, images):
                y = g.add(y, g.scale(int(c), im))
            perm.append(g.index(y))
        if len(set(perm)) != len(els):
            continue
        p = np.array(perm)
        if (b.exps[np.ix_(p, p)] % b.order == a.exps % a.order).all():
            return True
    return False


def automorphism_count(chi) -> int:
    return len(automorphisms_preserving(chi))
