"""Modular data of the Drinfeld center of TY(A, chi, tau).

Simples: X(a, eps) with eps^2 = chi(a, a)^{-1}; Y(a, b) for a != b (unordered);
Z(rho, Delta) with Delta^2 = tau * sum_x rho(x)^{-1}.  Dimensions 1, 2, sqrt(n).

Two S conventions are available.  "printed" fills the blocks with chi and rho
directly.  "balanced" (the default) uses chi^{-1} and rho^{-1} in the X and Y
blocks, which is the choice that satisfies the balancing equation against the
twists theta_X = chi(a, a)^{-1}, theta_Y = chi(a, b)^{-1}, theta_Z = Delta and
gives an integral Verlinde fusion.  The Z-Z block is the same in both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm

import numpy as np

from .abelian import Subgroup
from .cyclotomic import CyclotomicArray, CyclotomicNumber, _field, sqrt_root_of_unity
from .errors import InvariantViolation
from .forms import (
    FormAutomorphism,
    find_isotropic_2group,
    is_G_stable,
    lagrangian_subgroups,
)
from .modular_data import ModularData
from .ty import TYCategory

CONVENTIONS = ("balanced", "printed")


def _fmt_elem(a) -> str:
    return "(" + ",".join(str(x) for x in a) + ")"


def _fmt_phase(p: Fraction) -> str:
    return str(p % 1)


@dataclass(frozen=True)
class Inv:
    a: tuple
    eps: Fraction  # phase of epsilon
    branch: int

    def __str__(self):
        return f"X[{_fmt_elem(self.a)};{_fmt_phase(self.eps)}]"


@dataclass(frozen=True)
class TwoDim:
    a: tuple
    b: tuple

    def __str__(self):
        return f"Y[{_fmt_elem(self.a)},{_fmt_elem(self.b)}]"


@dataclass(frozen=True)
class Big:
    k: int  # index into TYCategory.rhos
    delta: Fraction  # phase of Delta
    branch: int

    def __str__(self):
        return f"Z[{self.k};{_fmt_phase(self.delta)}]"


def _phase_of(z: CyclotomicNumber) -> Fraction:
    t = z.root_phase()
    if t is None:
        raise InvariantViolation(f"{z!r} is not a root of unity")
    return t


class CenterData:
    """Labels, twists and S of Z(TY); built once per category."""

    def __init__(self, c: TYCategory):
        self.c = c
        g = c.group
        n = g.order
        chi = c.chi
        L = chi.order
        E = chi.exps
        self.inv = []
        for i, a in enumerate(g.elements):
            z = CyclotomicNumber.from_phase(Fraction(-int(E[i, i]), L), L)
            r0, r1 = sqrt_root_of_unity(z)
            self.inv += [Inv(a, _phase_of(r0), 0), Inv(a, _phase_of(r1), 1)]
        self.two = [TwoDim(g.elements[i], g.elements[j]) for i in range(n) for j in range(i + 1, n)]
        rel = c.relative_center()
        self.gammas = []
        self.big = []
        for k, rho in enumerate(c.rhos):
            gam = rel.gamma_scalar(rel.labels[n * n + k])
            if gam.abs_squared() != 1:
                raise InvariantViolation("tau * sum rho^{-1} does not have modulus one")
            self.gammas.append(gam)
            d0, d1 = sqrt_root_of_unity(gam)
            self.big += [Big(k, _phase_of(d0), 0), Big(k, _phase_of(d1), 1)]
        if len(self.inv) + len(self.two) + len(self.big) != 2 * n + n * (n - 1) // 2 + 2 * n:
            raise InvariantViolation("simple count disagrees with the center classification")
        phases = [s.eps for s in self.inv] + [s.delta for s in self.big]
        self.order = reduce(lcm, (p.denominator for p in phases), c.field_order)

    @property
    def labels(self) -> list:
        return self.inv + self.two + self.big

    def dims(self) -> list:
        one = CyclotomicNumber.one()
        return [one] * len(self.inv) + [CyclotomicNumber.from_rational(2)] * len(self.two) + [self.c.sqrt_n] * len(self.big)

    def theta_phases(self) -> list[Fraction]:
        chi = self.c.chi
        out = [-chi.phase(s.a, s.a) for s in self.inv]
        out += [-chi.phase(s.a, s.b) for s in self.two]
        out += [s.delta for s in self.big]
        return [p % 1 for p in out]

    def twists(self) -> list:
        return [CyclotomicNumber.from_phase(p, self.order) for p in self.theta_phases()]

    # -- S ------------------------------------------------------------------------

    def S(self, convention: str = "balanced") -> CyclotomicArray:
        if convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")
        s = -1 if convention == "balanced" else 1
        c = self.c
        g = c.group
        n = g.order
        M = self.order
        T = g.add_table
        chiM = c.chi.phases_over(M)
        phi = _field(M).phi

        ia = np.array([g.index(x.a) for x in self.inv])
        ie = np.array([int(x.eps * M) for x in self.inv])
        ya = np.array([g.index(x.a) for x in self.two], dtype=np.int64)
        yb = np.array([g.index(x.b) for x in self.two], dtype=np.int64)
        zk = np.array([x.k for x in self.big])
        zd = np.array([int(x.delta * M) for x in self.big])
        rho = np.stack([r.phases_over(M) for r in c.rhos])  # (n, n) indexed [k, a]

        def roots(exps):
            return CyclotomicArray.from_phases(exps, M).num

        K = len(self.labels)
        ni, nt = len(self.inv), len(self.two)
        num = np.zeros((K, K, phi), dtype=np.int64)
        blocks = {}
        # X-X: chi(a, a')^{2s}
        blocks["XX"] = roots(2 * s * chiM[np.ix_(ia, ia)])
        # X-Y: 2 chi(a, b + c)^s
        blocks["XY"] = 2 * roots(s * chiM[ia[:, None], T[ya, yb][None, :]])
        # Y-Y: 2 (chi(a, d) chi(b, c) + chi(a, c) chi(b, d))^s
        e1 = chiM[np.ix_(ya, yb)] + chiM[np.ix_(yb, ya)]
        e2 = chiM[np.ix_(ya, ya)] + chiM[np.ix_(yb, yb)]
        blocks["YY"] = 2 * (roots(s * e1) + roots(s * e2))
        # X-Z: eps sqrt(n) rho(a)^s
        xz = CyclotomicArray.from_phases(ie[:, None] + s * rho[zk][:, ia].T, M) * c.sqrt_n.embed(M)
        # Z-Z: (Delta Delta')^{-1} sum_a chi(a, a)^2 rho(a) rho'(a)
        diag2 = 2 * np.diagonal(chiM)
        ex = (diag2[None, None, :] + rho[:, None, :] + rho[None, :, :]) % M
        counts = np.stack([np.bincount(row, minlength=M) for row in ex.reshape(n * n, n)]).reshape(n, n, M)
        sums = CyclotomicArray(M, _field(M).reduce(counts))
        zz = CyclotomicArray(M, sums.num[np.ix_(zk, zk)].copy()) * CyclotomicArray.from_phases(-(zd[:, None] + zd[None, :]), M)

        den = lcm(xz.den, zz.den)

        def sc(arr, d):
            return arr * (den // d) if den != d else arr

        if xz.num.dtype == object or zz.num.dtype == object:
            num = num.astype(object)
        num[:ni, :ni] = sc(blocks["XX"], 1)
        num[:ni, ni : ni + nt] = sc(blocks["XY"], 1)
        num[ni : ni + nt, :ni] = sc(blocks["XY"].transpose(1, 0, 2), 1)
        num[ni : ni + nt, ni : ni + nt] = sc(blocks["YY"], 1)
        num[:ni, ni + nt :] = sc(xz.num, xz.den)
        num[ni + nt :, :ni] = sc(xz.num.transpose(1, 0, 2), xz.den)
        num[ni + nt :, ni + nt :] = sc(zz.num, zz.den)
        S = CyclotomicArray(M, num, den)
        if not (S.num == S.num.transpose(1, 0, 2)).all():
            raise InvariantViolation("center S-matrix is not symmetric")
        return S

    def modular_data(self, convention: str = "balanced") -> ModularData:
        c = self.c
        meta = {
            "kind": "center",
            "group": list(c.group.invariant_factors),
            "tau": "+" if c.tau_sign > 0 else "-",
            "convention": convention,
        }
        return ModularData([str(x) for x in self.labels], self.dims(), self.twists(), self.S(convention), meta)


def center_data(c: TYCategory) -> CenterData:
    cache = c.__dict__.setdefault("_center", {})
    if "data" not in cache:
        cache["data"] = CenterData(c)
    return cache["data"]


def center_simples(c: TYCategory) -> list:
    return center_data(c).labels


def center_twists(c: TYCategory) -> dict:
    d = center_data(c)
    return dict(zip(d.labels, d.twists()))


def center_S(c: TYCategory, convention: str = "balanced") -> CyclotomicArray:
    return center_data(c).S(convention)


def center_modular_data(c: TYCategory, convention: str = "balanced") -> ModularData:
    return center_data(c).modular_data(convention)


# -- criteria ---------------------------------------------------------------------------


def pointed_nondegenerate(c: TYCategory) -> bool:
    """Whether a -> chi(a, .)^{-2}, read off the invertible block of S, is injective.

    The verdict is cross-checked against |A| odd.
    """
    d = center_data(c)
    S = d.S()
    first = [i for i, x in enumerate(d.inv) if x.branch == 0]
    rows = S.num[np.ix_(first, first)]
    verdict = len({r.tobytes() for r in rows}) == len(first)
    if verdict != bool(c.n % 2):
        raise InvariantViolation("pointed-part verdict disagrees with the parity of |A|")
    return verdict


@dataclass
class GroupTheoreticity:
    verdict: bool
    witness: Subgroup | None
    lagrangians: list
    method: str

    def __bool__(self):
        return self.verdict


def is_group_theoretical(c: TYCategory) -> GroupTheoreticity:
    chi = c.chi
    Ls = lagrangian_subgroups(chi)
    n = c.n
    if Ls and n & (n - 1) == 0:
        w = find_isotropic_2group(chi)
        if w.indices not in {L.indices for L in Ls}:
            raise InvariantViolation("constructive isotropic witness missing from the Lagrangian list")
        return GroupTheoreticity(True, w, Ls, "isotropic-induction")
    # witness: the Lagrangian whose elements come first with the earliest generator varying fastest
    w = min(Ls, key=lambda L: sorted(x[::-1] for x in L.elements)) if Ls else None
    return GroupTheoreticity(bool(Ls), w, Ls, "search")


def equivariantization_is_gt(c: TYCategory, G) -> bool:
    chi = c.chi
    for g in G:
        if not isinstance(g, FormAutomorphism) or g.group != c.group:
            raise ValueError("G must consist of automorphisms of the category's group")
        if not (chi.exps[np.ix_(g.perm, g.perm)] == chi.exps).all():
            raise ValueError("an element of G does not preserve chi")
    return any(is_G_stable(L, G) for L in lagrangian_subgroups(chi))
