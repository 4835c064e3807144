"""Bicharacters, quadratic forms and rho-functions on finite abelian groups.

Every form is stored as an integer exponent table: a value table ``exps`` and
an ``order`` R such that the form's value at a point is zeta_R^exps.  Tables
are indexed by the group's element enumeration.  Cyclotomic numbers are only
materialized on request.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

import numpy as np

from .abelian import (
    Character,
    FiniteAbelianGroup,
    Subgroup,
    check_order_bound,
    enumerate_subgroups,
    subgroup_generated,
)
from .cyclotomic import CyclotomicArray, CyclotomicNumber, _field, legendre
from .errors import ArityError, DegenerateFormError, InvariantViolation

__all__ = [
    "Bicharacter",
    "QuadraticForm",
    "RhoFunction",
    "FormAutomorphism",
    "bicharacter_from_exponents",
    "hyperbolic_bicharacter",
    "diagonal_quadratic_form",
    "parse_form_spec",
    "hat",
    "unhat",
    "quadratic_from_bicharacter",
    "gauss_sum",
    "gauss_ratio_sign",
    "lagrangian_subgroups",
    "lagrangian_subgroups_by_filter",
    "has_lagrangian",
    "find_isotropic_2group",
    "solve_rho",
    "automorphisms_preserving",
    "is_G_stable",
    "legendre",
]


def _exp_counts(exps: np.ndarray, order: int) -> np.ndarray:
    return np.bincount(np.asarray(exps, dtype=np.int64).ravel() % order, minlength=order)


def _sum_of_roots(exps: np.ndarray, order: int) -> CyclotomicNumber:
    """sum of zeta_order^e over the given exponents, exactly."""
    counts = _exp_counts(exps, order)
    return CyclotomicNumber._from_array(order, _field(order).reduce(counts))


@dataclass(frozen=True, eq=False)
class _RootTable:
    """A function A -> mu_order given by exponents over the element enumeration."""

    group: FiniteAbelianGroup
    order: int
    exps: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.asarray(self.exps, dtype=np.int64) % self.order
        e.setflags(write=False)
        object.__setattr__(self, "exps", e)

    def phase(self, x) -> Fraction:
        return Fraction(int(self.exps[self.group.index(x)]), self.order)

    def __call__(self, x) -> CyclotomicNumber:
        return CyclotomicNumber.from_phase(self.phase(x), self.order)

    def values(self, order: int | None = None) -> CyclotomicArray:
        M = order or self.order
        return CyclotomicArray.from_phases(self.exps * (M // self.order), M)

    def phases_over(self, M: int) -> np.ndarray:
        """Exponents rewritten over a multiple M of the table order."""
        if M % self.order:
            raise ValueError(f"{M} is not a multiple of {self.order}")
        return self.exps * (M // self.order)

    def key(self) -> tuple:
        return (self.order, tuple(self.exps.tolist()))

    def __eq__(self, other):
        if not isinstance(other, _RootTable) or other.group != self.group:
            return NotImplemented
        M = lcm(self.order, other.order)
        return bool((self.phases_over(M) == other.phases_over(M)).all())

    def __hash__(self):
        M = self.order
        return hash((self.group, tuple(Fraction(int(e), M) for e in self.exps)))


class QuadraticForm(_RootTable):
    """q with q(a + b) = q(a) q(b) chi(a, b) and q(-a) = q(a)."""

    @cached_property
    def associated(self) -> "Bicharacter":
        g = self.group
        T = g.add_table
        e = self.exps
        L = self.order
        table = (e[T] - e[:, None] - e[None, :]) % L
        return Bicharacter(g, L, table)

    def validate(self, chi: "Bicharacter | None" = None) -> None:
        g = self.group
        if self.exps[0] != 0:
            raise InvariantViolation("q(0) != 1")
        if not (self.exps[g.neg_table] == self.exps).all():
            raise InvariantViolation("q(-a) != q(a)")
        if chi is not None:
            M = lcm(self.order, chi.order)
            T = g.add_table
            lhs = self.phases_over(M)[T]
            rhs = self.phases_over(M)[:, None] + self.phases_over(M)[None, :] + chi.phases_over(M)
            if not ((lhs - rhs) % M == 0).all():
                raise InvariantViolation("q(a+b) != q(a) q(b) chi(a,b)")


class RhoFunction(_RootTable):
    """rho with rho(a + b) = chi(a, b)^{-1} rho(a) rho(b)."""

    def satisfies(self, chi: "Bicharacter") -> bool:
        g = self.group
        M = lcm(self.order, chi.order)
        r = self.phases_over(M)
        T = g.add_table
        lhs = r[T]
        rhs = r[:, None] + r[None, :] - chi.phases_over(M)
        return bool(r[0] % M == 0 and ((lhs - rhs) % M == 0).all())

    def twist(self, phi: Character) -> "RhoFunction":
        g = self.group
        L = g.exponent
        M = lcm(self.order, L)
        return RhoFunction(g, M, self.phases_over(M) + phi.phases(g) * (M // L))


class Bicharacter:
    """A bimultiplicative map chi: A x A -> mu_L stored as an exponent table mod L."""

    def __init__(self, group: FiniteAbelianGroup, order: int, table: np.ndarray):
        self.group = group
        self.order = order
        t = np.asarray(table, dtype=np.int64) % order
        if t.shape != (group.order, group.order):
            raise ArityError("bicharacter table does not match the group order")
        t.setflags(write=False)
        self.exps = t

    def __repr__(self):
        return f"Bicharacter({self.group}, order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, Bicharacter) or other.group != self.group:
            return NotImplemented
        M = lcm(self.order, other.order)
        return bool((self.phases_over(M) == other.phases_over(M)).all())

    __hash__ = None

    def phases_over(self, M: int) -> np.ndarray:
        if M % self.order:
            raise ValueError(f"{M} is not a multiple of {self.order}")
        return self.exps * (M // self.order)

    def phase(self, x, y) -> Fraction:
        g = self.group
        return Fraction(int(self.exps[g.index(x), g.index(y)]), self.order)

    def __call__(self, x, y) -> CyclotomicNumber:
        return CyclotomicNumber.from_phase(self.phase(x, y), self.order)

    def table(self, order: int | None = None) -> CyclotomicArray:
        M = order or self.order
        return CyclotomicArray.from_phases(self.phases_over(M), M)

    # -- validated properties --------------------------------------------

    @cached_property
    def is_symmetric(self) -> bool:
        return bool((self.exps == self.exps.T).all())

    @cached_property
    def is_bimultiplicative(self) -> bool:
        # additivity in each slot against the standard generators is enough
        g = self.group
        T = g.add_table
        L = self.order
        for e in (self.exps, self.exps.T):
            if e[0].any():
                return False
            for gen in g.generators():
                i = g.index(gen)
                if ((e[T[:, i]] - e - e[i][None, :]) % L).any():
                    return False
        return True

    @cached_property
    def is_nondegenerate(self) -> bool:
        return len({row.tobytes() for row in self.exps}) == self.group.order

    def require_nondegenerate(self) -> None:
        if not self.is_symmetric or not self.is_nondegenerate:
            raise DegenerateFormError("operation needs a symmetric nondegenerate bicharacter")

    @cached_property
    def hat_exponents(self) -> np.ndarray:
        """Row a holds the character exponents c with hat(a)(x) = chi(x, a)."""
        g = self.group
        L = self.order
        gens = [g.index(e) for e in g.generators()]
        cols = []
        for i, n in enumerate(g.invariant_factors):
            v = self.exps[gens[i], :].astype(np.int64) * n
            if (v % L).any():
                raise InvariantViolation("bicharacter value on a generator is not an n_i-th root of unity")
            cols.append(v // L)
        return np.stack(cols, axis=1) if cols else np.zeros((g.order, 0), dtype=np.int64)

    @cached_property
    def _unhat_map(self) -> dict:
        return {tuple(row): i for i, row in enumerate(self.hat_exponents.tolist())}


# -- constructors -----------------------------------------------------------------


def _pairing_weights(g: FiniteAbelianGroup, B) -> np.ndarray:
    k = g.rank
    B = np.asarray(B, dtype=np.int64).reshape(k, k) if k else np.zeros((0, 0), dtype=np.int64)
    L = g.exponent
    W = np.zeros((k, k), dtype=np.int64)
    for i, ni in enumerate(g.invariant_factors):
        for j, nj in enumerate(g.invariant_factors):
            W[i, j] = B[i, j] * (L // gcd(ni, nj))
    return W


def bicharacter_from_exponents(g: FiniteAbelianGroup, B, *, symmetric: bool = True, nondegenerate: bool | None = None) -> Bicharacter:
    """chi(x, y) = prod_{i,j} zeta_{gcd(n_i, n_j)}^{B_ij x_i y_j}."""
    k = g.rank
    if np.size(B) != k * k:
        raise ArityError(f"exponent matrix needs {k * k} entries for {g}")
    L = g.exponent
    W = _pairing_weights(g, B)
    E = g.element_array
    table = (E @ W @ E.T) % L if k else np.zeros((1, 1), dtype=np.int64)
    chi = Bicharacter(g, L, table)
    if not chi.is_bimultiplicative:
        raise InvariantViolation("exponent data does not define a bicharacter")
    if symmetric and not chi.is_symmetric:
        raise DegenerateFormError("exponent matrix does not give a symmetric bicharacter")
    if nondegenerate and not chi.is_nondegenerate:
        raise DegenerateFormError("bicharacter asserted nondegenerate is degenerate")
    return chi


def hyperbolic_bicharacter(g: FiniteAbelianGroup) -> Bicharacter:
    """chi((x, x'), (y, y')) pairing consecutive equal cyclic factors crosswise."""
    f = g.invariant_factors
    if len(f) % 2 or any(f[i] != f[i + 1] for i in range(0, len(f), 2)):
        raise ValueError(f"hyperbolic form needs a group of the shape H x H, got {g}")
    k = len(f)
    B = np.zeros((k, k), dtype=np.int64)
    for i in range(0, k, 2):
        B[i, i + 1] = B[i + 1, i] = 1
    return bicharacter_from_exponents(g, B, nondegenerate=True)


def diagonal_quadratic_form(g: FiniteAbelianGroup, coeffs) -> QuadraticForm:
    """q(x) = prod_i zeta_{n_i}^{a_i x_i^2}."""
    coeffs = [int(a) for a in coeffs]
    if len(coeffs) != g.rank:
        raise ArityError(f"diag form needs {g.rank} coefficients for {g}")
    L = g.exponent
    w = np.array([a * (L // n) for a, n in zip(coeffs, g.invariant_factors)], dtype=np.int64)
    E = g.element_array
    exps = (E * E) @ w if g.rank else np.zeros(1, dtype=np.int64)
    q = QuadraticForm(g, L, exps)
    q.validate(q.associated)
    return q


def parse_form_spec(g: FiniteAbelianGroup, spec: str) -> tuple[Bicharacter, QuadraticForm | None]:
    """Parse ``gram:B11,B12,...``, ``hyperbolic`` or ``diag:a1,...``.

    Returns the bicharacter and, for ``diag``, the defining quadratic form.
    """
    spec = spec.strip()
    if spec == "hyperbolic":
        return hyperbolic_bicharacter(g), None
    kind, _, body = spec.partition(":")
    try:
        values = [int(t) for t in body.split(",")] if body.strip() else []
    except ValueError:
        raise ValueError(f"malformed form spec {spec!r}") from None
    if kind == "gram":
        return bicharacter_from_exponents(g, np.array(values, dtype=np.int64)), None
    if kind == "diag":
        q = diagonal_quadratic_form(g, values)
        return q.associated, q
    raise ValueError(f"unknown form spec {spec!r}; expected gram:..., hyperbolic or diag:...")


# -- hat maps ------------------------------------------------------------------------


def hat(chi: Bicharacter, a) -> Character:
    chi.require_nondegenerate()
    return Character(tuple(int(c) for c in chi.hat_exponents[chi.group.index(a)]))


def unhat(chi: Bicharacter, phi: Character):
    chi.require_nondegenerate()
    try:
        return chi.group.elements[chi._unhat_map[tuple(phi.exponents)]]
    except KeyError:
        raise ValueError(f"{phi} is not in the image of hat") from None


# -- quadratic forms and Gauss sums ------------------------------------------------------


def quadratic_from_bicharacter(chi: Bicharacter) -> QuadraticForm:
    """The unique q refining chi on a group of odd order: q(a) = chi(a, a)^m, 2m = 1 mod L."""
    g = chi.group
    if g.order % 2 == 0:
        raise ValueError("a bicharacter determines its quadratic refinement only on odd groups")
    chi.require_nondegenerate()
    L = chi.order
    m = (L + 1) // 2
    q = QuadraticForm(g, L, np.diagonal(chi.exps) * m)
    q.validate(chi)
    return q


def gauss_sum(f: _RootTable, power: int = 1) -> CyclotomicNumber:
    """sum_a f(a)^power."""
    return _sum_of_roots(f.exps * power, f.order)


def gauss_ratio_sign(q: QuadraticForm) -> int:
    """The sign s with sum q^2 = s sum q, which must exist for nondegenerate q on odd groups."""
    if q.group.order % 2 == 0:
        raise ValueError("gauss_ratio_sign is defined for groups of odd order")
    g1 = gauss_sum(q, 1)
    if g1.is_zero():
        raise DegenerateFormError("Gauss sum vanishes; q is degenerate")
    r = (gauss_sum(q, 2) / g1).is_rational()
    if r not in (1, -1):
        raise InvariantViolation(f"Gauss sum ratio is {r}, not +-1")
    return int(r)


# -- Lagrangian subgroups -------------------------------------------------------------


def _is_square(n: int) -> bool:
    r = int(round(n ** 0.5))
    return r * r == n


def lagrangian_subgroups(chi: Bicharacter) -> list[Subgroup]:
    """All L <= A with |L|^2 = |A| on which chi is identically 1.

    Grows totally isotropic subgroups one isotropic orthogonal element at a
    time; only Lagrangian end points are returned, sorted by element indices.
    """
    g = chi.group
    check_order_bound(g)
    if not chi.is_symmetric:
        raise DegenerateFormError("Lagrangian criterion needs a symmetric bicharacter")
    n = g.order
    if not _is_square(n):
        return []
    target = int(round(n ** 0.5))
    e = chi.exps
    isotropic = np.flatnonzero(np.diagonal(e) == 0)
    trivial = frozenset([0])
    seen = {trivial: ()}
    found = {}
    stack = [trivial]
    while stack:
        H = stack.pop()
        if len(H) == target:
            found[H] = seen[H]
            continue
        H_arr = np.array(sorted(H))
        perp = (e[H_arr][:, isotropic] == 0).all(axis=0)
        for x in isotropic[perp]:
            x = int(x)
            if x in H:
                continue
            K = frozenset(np.unique(g.add_table[np.ix_(H_arr, _multiples(g, x))]).tolist())
            if K not in seen:
                seen[K] = seen[H] + (g.elements[x],)
                stack.append(K)
    out = [Subgroup(g, K, gens) for K, gens in found.items()]
    return sorted(out, key=lambda s: sorted(s.indices))


def _multiples(g: FiniteAbelianGroup, x: int) -> np.ndarray:
    m = [0]
    y = x
    while y != 0:
        m.append(y)
        y = int(g.add_table[y, x])
    return np.array(m)


def lagrangian_subgroups_by_filter(chi: Bicharacter) -> list[Subgroup]:
    """Oracle: test every subgroup from the exhaustive enumeration."""
    g = chi.group
    n = g.order
    out = []
    for s in enumerate_subgroups(g):
        if s.order * s.order != n:
            continue
        idx = np.array(sorted(s.indices))
        if (chi.exps[np.ix_(idx, idx)] == 0).all():
            out.append(s)
    return sorted(out, key=lambda s: sorted(s.indices))


def has_lagrangian(chi: Bicharacter) -> bool:
    return bool(lagrangian_subgroups(chi))


def find_isotropic_2group(chi: Bicharacter) -> Subgroup:
    """A Lagrangian subgroup of a 2-group of square order, built one isotropic element at a time.

    With I totally isotropic, the form descends to a nondegenerate form on
    I^perp / I, which again has square 2-power order; any isotropic class there
    lifts to x in I^perp - I with chi(x, x) = 1, and <I, x> is isotropic.
    """
    g = chi.group
    n = g.order
    if n & (n - 1) or not _is_square(n):
        raise ValueError(f"find_isotropic_2group needs a 2-group of square order, got |A| = {n}")
    chi.require_nondegenerate()
    e = chi.exps
    target = int(round(n ** 0.5))
    I = np.array([0])
    gens = []
    while len(I) < target:
        perp = (e[I] == 0).all(axis=0)
        inside = set(I.tolist())
        candidates = [x for x in np.flatnonzero(perp & (np.diagonal(e) == 0)) if x not in inside]
        candidates.sort(key=lambda x: g.elements[x][::-1])  # earliest generator first
        if not candidates:
            raise InvariantViolation("no isotropic element in I^perp / I")
        x = int(candidates[0])
        gens.append(g.elements[x])
        I = np.unique(g.add_table[np.ix_(I, _multiples(g, x))])
    return Subgroup(g, frozenset(I.tolist()), tuple(gens))


# -- rho solutions -------------------------------------------------------------------


def solve_rho(chi: Bicharacter) -> list[RhoFunction]:
    """All rho: A -> k^x with rho(a + b) = chi(a, b)^{-1} rho(a) rho(b), sorted by value table.

    A seed is fixed on the standard generators e_k of orders n_k: writing
    c_k for the phase of chi(e_k, e_k), consistency of rho on <e_k> forces
    n_k r_k = c_k n_k (n_k - 1) / 2 (mod 1) for the phase r_k of rho(e_k); we
    take r_k = c_k (n_k - 1) / 2.  The seed is extended by
        rho(x) = prod_k rho(e_k)^{x_k} chi(e_k, e_k)^{-x_k (x_k - 1) / 2}
                 * prod_{k < l} chi(e_k, e_l)^{-x_k x_l},
    and the remaining solutions are its twists by all characters.
    """
    chi.require_nondegenerate()
    g = chi.group
    L = chi.order
    R = L if g.order % 2 else 2 * L
    f = g.invariant_factors
    gens = [g.index(e) for e in g.generators()]
    C = np.array([[int(chi.exps[a, b]) for b in gens] for a in gens], dtype=np.int64).reshape(len(gens), len(gens))
    s = R // L
    E = g.element_array
    phase = np.zeros(g.order, dtype=np.int64)
    for k, n in enumerate(f):
        ck = int(C[k, k]) * s  # phase of chi(e_k, e_k), over R
        rk2 = ck * (n - 1)  # twice the seed phase, over R
        if rk2 % 2:
            raise InvariantViolation("seed phase is not representable over the chosen order")
        rk = rk2 // 2
        x = E[:, k]
        tri = x * (x - 1)
        phase += x * rk - ck * tri // 2
        for l in range(k + 1, len(f)):
            phase -= int(C[k, l]) * s * x * E[:, l]
    seed = RhoFunction(g, R, phase)
    if not seed.satisfies(chi):
        raise InvariantViolation("seed rho-function fails its defining identity")
    sols = {}
    for c in g.elements:
        r = seed.twist(Character(c))
        sols[r.key()] = r
    if len(sols) != g.order:
        raise InvariantViolation("character twists of the seed are not distinct")
    return [sols[k] for k in sorted(sols)]


# -- automorphisms ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FormAutomorphism:
    group: FiniteAbelianGroup
    images: tuple  # images of the standard generators
    perm: np.ndarray = field(repr=False)

    def __call__(self, x):
        return self.group.elements[int(self.perm[self.group.index(x)])]

    def __eq__(self, other):
        return isinstance(other, FormAutomorphism) and self.group == other.group and self.images == other.images

    def __hash__(self):
        return hash((self.group, self.images))


def automorphism_from_images(g: FiniteAbelianGroup, images, chi: Bicharacter | None = None) -> FormAutomorphism:
    images = tuple(g.reduce(y) for y in images)
    if len(images) != g.rank:
        raise ArityError("need one image per generator")
    for y, n in zip(images, g.invariant_factors):
        if g.order_of(y) and n % g.order_of(y):
            raise ValueError("generator images violate the order relations")
    Y = np.array(images, dtype=np.int64).reshape(g.rank, g.rank)
    perm = g.index_array(g.element_array @ Y) if g.rank else np.zeros(1, dtype=np.int64)
    if len(set(perm.tolist())) != g.order:
        raise ValueError("generator images do not define a bijection")
    if chi is not None and not (chi.exps[np.ix_(perm, perm)] == chi.exps).all():
        raise ValueError("map does not preserve the bicharacter")
    return FormAutomorphism(g, images, perm)


def automorphisms_preserving(chi: Bicharacter) -> list[FormAutomorphism]:
    """Every additive bijection f with chi(f x, f y) = chi(x, y), by backtracking on generator images."""
    g = chi.group
    check_order_bound(g)
    e = chi.exps
    gens = [g.index(x) for x in g.generators()]
    f = g.invariant_factors
    orders = np.array([g.order_of(x) for x in g.elements])
    out = []

    def extend(chosen):
        i = len(chosen)
        if i == len(gens):
            try:
                out.append(automorphism_from_images(g, [g.elements[c] for c in chosen], chi))
            except ValueError:
                pass
            return
        gi = gens[i]
        ok = (f[i] % orders == 0) & (np.diagonal(e) == e[gi, gi])
        for j, c in enumerate(chosen):
            ok &= e[:, c] == e[gi, gens[j]]
        for y in np.flatnonzero(ok):
            extend(chosen + [int(y)])

    extend([])
    return out


def is_G_stable(L: Subgroup, G) -> bool:
    idx = np.array(sorted(L.indices))
    return all(set(g.perm[idx].tolist()) == L.indices for g in G)
