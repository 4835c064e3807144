"""The Tambara-Yamagami category TY(A, chi, tau) and its relative center.

The category is skeletal: simple objects are labels and all structure is
scalar data.  The relative center has simples X(a, phi), a in A and phi a
character, whose central structure on x is phi(x), and Z(rho), one for each
rho with rho(a + b) = chi(a, b)^{-1} rho(a) rho(b), with central structure
rho(x).

Internally the rho-functions are kept as character offsets from one seed
solution, so the fusion rules become index arithmetic in A x A-hat.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import lcm

import numpy as np

from .abelian import Character, FiniteAbelianGroup, check_order_bound
from .cyclotomic import CyclotomicNumber, sqrt_positive_integer
from .errors import InvariantViolation
from .forms import Bicharacter, RhoFunction, gauss_sum, solve_rho


@dataclass(frozen=True)
class Invertible:
    a: tuple

    def __str__(self):
        return f"{self.a}"


@dataclass(frozen=True)
class MObject:
    def __str__(self):
        return "m"


M_OBJECT = MObject()


@dataclass(frozen=True)
class XLabel:
    """X(a, phi) in the relative center."""

    a: tuple
    phi: tuple

    def __str__(self):
        return f"X[{self.a},{self.phi}]"


@dataclass(frozen=True)
class ZLabel:
    """Z(rho) in the relative center; equality compares the rho value tables."""

    rho: RhoFunction

    def __str__(self):
        return f"Z[{','.join(str(int(e)) for e in self.rho.exps)}/{self.rho.order}]"


class TYCategory:
    def __init__(self, chi: Bicharacter, tau_sign: int = 1):
        if tau_sign not in (1, -1):
            raise ValueError("tau_sign must be +1 or -1")
        chi.require_nondegenerate()
        check_order_bound(chi.group)
        self.group: FiniteAbelianGroup = chi.group
        self.chi = chi
        self.tau_sign = tau_sign

    @property
    def n(self) -> int:
        return self.group.order

    @cached_property
    def sqrt_n(self) -> CyclotomicNumber:
        return sqrt_positive_integer(self.n)

    @cached_property
    def tau(self) -> CyclotomicNumber:
        t = self.sqrt_n.inv() * self.tau_sign
        if t * t * self.n != 1:
            raise InvariantViolation("tau^2 != 1/n")
        return t

    @cached_property
    def rhos(self) -> list[RhoFunction]:
        return solve_rho(self.chi)

    @cached_property
    def field_order(self) -> int:
        """Cyclotomic order holding chi, rho, tau and sqrt(n)."""
        L = self.group.exponent
        rho_order = self.rhos[0].order if self.rhos else 1
        return lcm(8, 2 * L, 4 * self.n, self.sqrt_n.order, rho_order)

    def __repr__(self):
        return f"TY({self.group}, tau={'+' if self.tau_sign > 0 else '-'})"

    # -- the fusion category itself --------------------------------------------

    def simples(self) -> list:
        return [Invertible(a) for a in self.group.elements] + [M_OBJECT]

    def fpdim(self, s) -> CyclotomicNumber:
        return self.sqrt_n if isinstance(s, MObject) else CyclotomicNumber.one()

    def relative_center(self, xz_reading: str = "minus_hat") -> "RelativeCenter":
        cache = self.__dict__.setdefault("_relcenters", {})
        if xz_reading not in cache:
            cache[xz_reading] = RelativeCenter(self, xz_reading)
        return cache[xz_reading]


def ty_fusion(c: TYCategory, s, t) -> list:
    g = c.group
    if isinstance(s, Invertible) and isinstance(t, Invertible):
        return [Invertible(g.add(s.a, t.a))]
    if isinstance(s, MObject) and isinstance(t, MObject):
        return [Invertible(a) for a in g.elements]
    return [M_OBJECT]


def ty_associator(c: TYCategory, s, t, u) -> dict:
    """Scalar components of the associativity constraint, keyed by summand.

    alpha_{a,m,b} = chi(a, b); alpha_{m,a,m} = (+)_b chi(a, b);
    alpha_{m,m,m} = (+)_{a,b} tau chi(a, b)^{-1}; every other component is 1.
    """
    chi = c.chi
    g = c.group
    kinds = tuple(isinstance(x, MObject) for x in (s, t, u))
    if kinds == (False, True, False):
        return {M_OBJECT: chi(s.a, u.a)}
    if kinds == (True, False, True):
        return {Invertible(b): chi(t.a, b) for b in g.elements}
    if kinds == (True, True, True):
        return {(a, b): c.tau * chi(a, b).inv() for a in g.elements for b in g.elements}
    one = CyclotomicNumber.one()
    out = {}
    for x in ty_fusion(c, s, t):
        for y in ty_fusion(c, x, u):
            out[y] = one
    return out


# -- relative center ---------------------------------------------------------------


def _character_from_values(g: FiniteAbelianGroup, exps: np.ndarray, order: int) -> np.ndarray:
    """Character exponents of a function A -> mu_order known to be a character."""
    gens = g.generators()
    cols = []
    for i, n in enumerate(g.invariant_factors):
        v = int(exps[g.index(gens[i])]) * n
        if v % order:
            raise InvariantViolation("function is not a character")
        cols.append(v // order % n)
    M = lcm(order, g.exponent)
    values = Character(tuple(cols)).phases(g) * (M // g.exponent)
    if ((values - np.asarray(exps) * (M // order)) % M).any():
        raise InvariantViolation("function is not a character")
    return np.array(cols, dtype=np.int64)


class RelativeCenter:
    """Labels and fusion of the relative center, with index-level tables.

    Index layout: X(a, phi) sits at a_idx * n + phi_idx, Z(rho_k) at n^2 + k,
    where k follows the sorted order of ``TYCategory.rhos``.
    """

    def __init__(self, c: TYCategory, xz_reading: str = "minus_hat"):
        if xz_reading not in ("minus_hat", "plus_hat"):
            raise ValueError("xz_reading must be 'minus_hat' or 'plus_hat'")
        self.c = c
        self.xz_reading = xz_reading
        g = c.group
        n = g.order
        self.n = n
        chi = c.chi
        rhos = c.rhos
        seed = rhos[0]
        # rho_k = seed * psi_k; record psi_k as an element-indexed character label
        M = lcm(seed.order, g.exponent)
        self._rho_offset = np.zeros(n, dtype=np.int64)
        for k, r in enumerate(rhos):
            diff = (r.phases_over(M) - seed.phases_over(M)) % M
            psi = _character_from_values(g, diff, M)
            self._rho_offset[k] = g.index(tuple(int(x) for x in psi))
        self._rho_of_offset = np.empty(n, dtype=np.int64)
        self._rho_of_offset[self._rho_offset] = np.arange(n)
        # seed(x) / seed(-x) is a character
        sbar = (seed.exps - seed.exps[g.neg_table]) % seed.order
        self._seed_ratio = g.index(tuple(int(x) for x in _character_from_values(g, sbar, seed.order)))
        self._hat = np.array([g.index(tuple(int(v) for v in row)) for row in chi.hat_exponents], dtype=np.int64)
        self._unhat = np.empty(n, dtype=np.int64)
        self._unhat[self._hat] = np.arange(n)

    @property
    def size(self) -> int:
        return self.n * self.n + self.n

    @cached_property
    def labels(self) -> list:
        g = self.c.group
        els = g.elements
        out = [XLabel(a, phi) for a in els for phi in els]
        out += [ZLabel(r) for r in self.c.rhos]
        return out

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label) -> int:
        return self._index[label]

    def dims(self) -> list[CyclotomicNumber]:
        one = CyclotomicNumber.one()
        return [one] * (self.n * self.n) + [self.c.sqrt_n] * self.n

    # -- fusion -------------------------------------------------------------------

    def _x_times_z(self, a: int, phi: int, k: int) -> int:
        T = self.c.group.add_table
        neg = self.c.group.neg_table
        hat_a = self._hat[a]
        shift = neg[hat_a] if self.xz_reading == "minus_hat" else hat_a
        off = T[T[self._rho_offset[k], phi], shift]
        return self.n * self.n + int(self._rho_of_offset[off])

    def fuse_indices(self, i: int, j: int) -> list[int]:
        n = self.n
        T = self.c.group.add_table
        if i < n * n and j < n * n:
            a, phi = divmod(i, n)
            b, psi = divmod(j, n)
            return [int(T[a, b]) * n + int(T[phi, psi])]
        if i < n * n:
            a, phi = divmod(i, n)
            return [self._x_times_z(a, phi, j - n * n)]
        if j < n * n:
            b, psi = divmod(j, n)
            return [self._x_times_z(b, psi, i - n * n)]
        # Z_{rho'} (x) Z_rho = (+)_a X(a, hat(a) rho' / rho-bar)
        kp, k = i - n * n, j - n * n
        base = T[T[self._rho_offset[kp], self._rho_offset[k]], self._seed_ratio]
        return [a * n + int(T[self._hat[a], base]) for a in range(n)]

    def fusion(self, u, v) -> list:
        labs = self.labels
        return [labs[k] for k in self.fuse_indices(self.index(u), self.index(v))]

    @cached_property
    def fusion_tensor(self) -> np.ndarray:
        N = np.zeros((self.size,) * 3, dtype=np.int64)
        for i in range(self.size):
            for j in range(self.size):
                for k in self.fuse_indices(i, j):
                    N[i, j, k] += 1
        return N

    # -- Z/2 action, gamma, crossed braiding ------------------------------------------

    def t_delta_index(self, i: int) -> int:
        n = self.n
        if i >= n * n:
            return i
        a, phi = divmod(i, n)
        neg = self.c.group.neg_table
        return int(neg[self._unhat[phi]]) * n + int(neg[self._hat[a]])

    def t_delta(self, u):
        return self.labels[self.t_delta_index(self.index(u))]

    def gamma_scalar(self, u) -> CyclotomicNumber:
        c = self.c
        g = c.group
        if isinstance(u, XLabel):
            return CyclotomicNumber.from_phase(Character(u.phi).phase(g, u.a))
        rho = u.rho
        return c.tau * gauss_sum(rho, -1)

    def crossed_braiding(self, u, v):
        """Scalars of the crossed braiding c_{u,v}; a dict over summands for Z (x) Z."""
        g = self.c.group
        if isinstance(u, XLabel) and isinstance(v, XLabel):
            return CyclotomicNumber.from_phase(Character(v.phi).phase(g, u.a))
        if isinstance(u, XLabel):
            return v.rho(u.a)
        if isinstance(v, XLabel):
            return CyclotomicNumber.one()
        return {a: v.rho(g.neg(a)).inv() for a in g.elements}


def relcenter_simples(c: TYCategory) -> list:
    return c.relative_center().labels


def relcenter_fusion(c: TYCategory, u, v, xz_reading: str = "minus_hat") -> list:
    return c.relative_center(xz_reading).fusion(u, v)


def t_delta(c: TYCategory, u):
    return c.relative_center().t_delta(u)


def gamma_scalar(c: TYCategory, u) -> CyclotomicNumber:
    return c.relative_center().gamma_scalar(u)


def crossed_braiding(c: TYCategory, u, v):
    return c.relative_center().crossed_braiding(u, v)
