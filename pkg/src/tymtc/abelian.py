"""Finite abelian groups in invariant-factor form.

Elements are plain tuples of residues ``(x_1, ..., x_k)`` with ``0 <= x_i < n_i``;
they carry no reference to their group, so every operation takes the group
explicitly.  Groups cache an element enumeration (lexicographic order) and an
addition table, which the forms and category modules index into heavily.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm, prod

import numpy as np

from .errors import ArityError, ResourceBoundError

GroupElement = tuple

DEFAULT_MAX_ORDER = 1024


def max_group_order() -> int:
    """Desk-scale bound on group orders; overridable via ``MTC_MAX_GROUP_ORDER``."""
    value = os.environ.get("MTC_MAX_GROUP_ORDER")
    return int(value) if value else DEFAULT_MAX_ORDER


def _prime_factorization(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(factors) -> tuple[int, ...]:
    """Normalize an arbitrary list of cyclic orders to a divisor chain."""
    powers: dict[int, list[int]] = defaultdict(list)
    for f in factors:
        f = int(f)
        if f < 1:
            raise ValueError(f"cyclic factor must be >= 1, got {f}")
        for p, e in _prime_factorization(f).items():
            powers[p].append(e)
    if not powers:
        return ()
    depth = max(len(v) for v in powers.values())
    chain = []
    for level in range(depth):
        n = 1
        for p, exps in powers.items():
            exps = sorted(exps, reverse=True)
            if level < len(exps):
                n *= p ** exps[level]
        chain.append(n)
    return tuple(reversed(chain))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/n_1 x ... x Z/n_k with n_1 | n_2 | ... | n_k, each n_i >= 2."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        f = self.invariant_factors
        if any(n < 2 for n in f) or any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"{f} is not an invariant-factor chain; use make_group")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{n}" for n in self.invariant_factors)

    # -- element arithmetic -------------------------------------------------

    def check(self, x) -> GroupElement:
        if len(x) != self.rank:
            raise ArityError(f"element {tuple(x)} has arity {len(x)}, group {self} has rank {self.rank}")
        return x

    def reduce(self, x) -> GroupElement:
        self.check(x)
        return tuple(int(a) % n for a, n in zip(x, self.invariant_factors))

    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def add(self, x, y) -> GroupElement:
        self.check(x)
        self.check(y)
        return tuple((a + b) % n for a, b, n in zip(x, y, self.invariant_factors))

    def neg(self, x) -> GroupElement:
        self.check(x)
        return tuple(-a % n for a, n in zip(x, self.invariant_factors))

    def sub(self, x, y) -> GroupElement:
        return self.add(x, self.neg(y))

    def scale(self, k: int, x) -> GroupElement:
        self.check(x)
        return tuple(k * a % n for a, n in zip(x, self.invariant_factors))

    def order_of(self, x) -> int:
        self.check(x)
        return reduce(lcm, (n // gcd(a, n) for a, n in zip(x, self.invariant_factors)), 1)

    def generators(self) -> list[GroupElement]:
        """Standard basis e_1, ..., e_k."""
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    # -- enumeration --------------------------------------------------------

    @cached_property
    def elements(self) -> list[GroupElement]:
        return list(itertools.product(*(range(n) for n in self.invariant_factors)))

    @cached_property
    def element_array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64).reshape(self.order, self.rank)

    @cached_property
    def _strides(self) -> np.ndarray:
        strides = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * self.invariant_factors[i + 1]
        return np.array(strides, dtype=np.int64)

    def index(self, x) -> int:
        return int(np.dot(np.asarray(self.reduce(x), dtype=np.int64), self._strides)) if self.rank else 0

    def index_array(self, residues: np.ndarray) -> np.ndarray:
        """Vectorized index of an (..., rank) array of (unreduced) residues."""
        if self.rank == 0:
            return np.zeros(residues.shape[:-1], dtype=np.int64)
        mods = np.array(self.invariant_factors, dtype=np.int64)
        return (residues % mods) @ self._strides

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[i, j]`` is the index of elements[i] + elements[j]."""
        E = self.element_array
        return self.index_array(E[:, None, :] + E[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.index_array(-self.element_array)


def make_group(factors=()) -> FiniteAbelianGroup:
    """Build a group from cyclic factors in any form, e.g. ``[2, 3] -> Z/6``."""
    return FiniteAbelianGroup(invariant_factors(factors))


def parse_group(spec: str) -> FiniteAbelianGroup:
    """Parse the CLI group format ``"3,3"``; an empty string is the trivial group."""
    spec = spec.strip()
    if not spec or spec == "0":
        return make_group([])
    try:
        factors = [int(tok) for tok in spec.split(",")]
    except ValueError:
        raise ValueError(f"malformed group spec {spec!r}; expected comma-separated integers") from None
    if any(f < 1 for f in factors):
        raise ValueError(f"malformed group spec {spec!r}; factors must be positive")
    return make_group(factors)


def parse_element(g: FiniteAbelianGroup, literal: str) -> GroupElement:
    """Parse an element literal ``"(1,2)"``."""
    body = literal.strip().removeprefix("(").removesuffix(")")
    residues = tuple(int(tok) for tok in body.split(",") if tok.strip()) if body.strip() else ()
    return g.reduce(residues)


def check_order_bound(g: FiniteAbelianGroup, bound: int | None = None) -> None:
    bound = max_group_order() if bound is None else bound
    if g.order > bound:
        raise ResourceBoundError(f"|A| = {g.order} exceeds the desk-scale bound {bound}")


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteAbelianGroup
    indices: frozenset
    generators: tuple

    @property
    def order(self) -> int:
        return len(self.indices)

    @property
    def elements(self) -> list[GroupElement]:
        els = self.parent.elements
        return [els[i] for i in sorted(self.indices)]

    def __contains__(self, x) -> bool:
        return self.parent.index(x) in self.indices

    def __str__(self):
        gens = ", ".join(str(g) for g in self.generators) if self.generators else "0"
        return f"<{gens}>"


def _join(g: FiniteAbelianGroup, H: np.ndarray, x: int) -> np.ndarray:
    """Indices of the subgroup generated by the sorted index array H and element x."""
    hset = set(H.tolist())
    multiples = [0]
    m = x
    while m not in hset:
        multiples.append(m)
        m = int(g.add_table[m, x])
    return np.unique(g.add_table[np.ix_(H, np.array(multiples))])


def subgroup_generated(g: FiniteAbelianGroup, gens) -> Subgroup:
    H = np.array([0])
    kept = []
    for x in gens:
        i = g.index(x)
        if i not in set(H.tolist()):
            H = _join(g, H, i)
            kept.append(g.reduce(x))
    return Subgroup(g, frozenset(H.tolist()), tuple(kept))


def enumerate_subgroups(g: FiniteAbelianGroup, bound: int | None = None) -> list[Subgroup]:
    """All subgroups, found by breadth-first adjunction of one element at a time.

    A subgroup first reached at depth k needs exactly k generators, so the
    recorded generator tuples have minimal length.  Order: by depth, then by
    discovery.
    """
    check_order_bound(g, bound)
    trivial = Subgroup(g, frozenset([0]), ())
    seen = {trivial.indices: trivial}
    frontier = [trivial]
    els = g.elements
    while frontier:
        nxt = []
        for H in frontier:
            H_arr = np.array(sorted(H.indices))
            covered = set(H.indices)
            for x in range(g.order):
                if x in covered:
                    continue
                covered.update(g.add_table[H_arr, x].tolist())
                K = frozenset(_join(g, H_arr, x).tolist())
                if K not in seen:
                    sub = Subgroup(g, K, H.generators + (els[x],))
                    seen[K] = sub
                    nxt.append(sub)
        frontier = nxt
    return list(seen.values())


# -- characters ---------------------------------------------------------------


@dataclass(frozen=True)
class Character:
    """The character x -> prod_i exp(2 pi i c_i x_i / n_i)."""

    exponents: tuple

    def phase(self, g: FiniteAbelianGroup, x) -> Fraction:
        if len(self.exponents) != g.rank or len(x) != g.rank:
            raise ArityError("character / element arity does not match the group")
        return sum((Fraction(c * a, n) for c, a, n in zip(self.exponents, x, g.invariant_factors)), Fraction(0)) % 1

    def phases(self, g: FiniteAbelianGroup) -> np.ndarray:
        """Exponents mod exponent(g) over all elements (vectorized)."""
        L = g.exponent
        w = np.array([c * (L // n) for c, n in zip(self.exponents, g.invariant_factors)], dtype=np.int64)
        return (g.element_array @ w) % L if g.rank else np.zeros(1, dtype=np.int64)


def trivial_character(g: FiniteAbelianGroup) -> Character:
    return Character((0,) * g.rank)


def all_characters(g: FiniteAbelianGroup) -> list[Character]:
    return [Character(c) for c in g.elements]


def character_add(g: FiniteAbelianGroup, phi: Character, psi: Character) -> Character:
    return Character(g.add(phi.exponents, psi.exponents))


def character_neg(g: FiniteAbelianGroup, phi: Character) -> Character:
    return Character(g.neg(phi.exponents))


def character_eval(g: FiniteAbelianGroup, phi: Character, x):
    """phi(x) as an exact root of unity."""
    from .cyclotomic import CyclotomicNumber

    return CyclotomicNumber.from_phase(phi.phase(g, x))
