"""Exact verification of modular data, and the zero-structure checks for weakly integral data.

Verlinde fusion is estimated in floating point, rounded, and then certified
exactly: with S invertible, the integer tensor N is the Verlinde fusion iff
    sum_z N_{xy}^z S_{zw} S_{0w} = S_{xw} S_{yw}   for all x, y, w.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .cyclotomic import CyclotomicArray, CyclotomicNumber, sqrt_positive_integer
from .modular_data import ModularData

# -- ring helpers ------------------------------------------------------------------------


def ring_associative(N: np.ndarray) -> bool:
    """(x y) z == x (y z) for the structure constants N[x, y, z]."""
    K = N.shape[0]
    Nf = N.astype(np.float64)
    # left[x, y, z, w] = sum_u N[x, y, u] N[u, z, w]
    left = (Nf.reshape(K * K, K) @ Nf.reshape(K, K * K)).reshape(K, K, K, K)
    # right[x, y, z, w] = sum_u N[y, z, u] N[x, u, w]
    right = np.einsum("yzu,xuw->xyzw", Nf, Nf, optimize=True)
    return bool(np.array_equal(left, right))


def ring_unit(N: np.ndarray, unit: int = 0) -> bool:
    K = N.shape[0]
    eye = np.eye(K, dtype=N.dtype)
    return bool((N[unit] == eye).all() and (N[:, unit] == eye).all())


def ring_commutative(N: np.ndarray) -> bool:
    return bool((N == N.transpose(1, 0, 2)).all())


def dual_map(N: np.ndarray, unit: int = 0) -> np.ndarray | None:
    """x -> x* with N[x, x*, unit] = 1, or None if some x has no unique dual."""
    hits = N[:, :, unit]
    if not ((hits.sum(axis=1) == 1).all() and set(np.unique(hits)) <= {0, 1}):
        return None
    return hits.argmax(axis=1)


def ring_report(N: np.ndarray, unit: int = 0) -> dict:
    d = dual_map(N, unit)
    return {
        "nonnegative": bool((N >= 0).all()),
        "unit": ring_unit(N, unit),
        "commutative": ring_commutative(N),
        "associative": ring_associative(N),
        "duals": d is not None,
        "frobenius_reciprocity": d is not None and bool((N == N[:, d, :][:, :, d].transpose(0, 2, 1)).all()),
    }


# -- reports -----------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexample: object = None
    skipped: bool = False

    def to_json(self):
        out = {"status": "skip" if self.skipped else ("pass" if self.passed else "fail")}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)
    N: np.ndarray | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed or c.skipped for c in self.checks.values())

    def add(self, res: CheckResult):
        self.checks[res.name] = res

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks.values() if not c.passed and not c.skipped]

    def to_json_obj(self) -> dict:
        return {
            "passed": self.passed,
            "checks": {k: v.to_json() for k, v in self.checks.items()},
            "derived": self.derived,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1)


def _exact_and_numeric(z: CyclotomicNumber, digits: int = 12) -> dict:
    c = z.to_complex()
    return {"exact": z.to_json(), "numeric": [round(c.real, digits), round(c.imag, digits)]}


# -- working view --------------------------------------------------------------------------


class _View:
    """ModularData embedded into one cyclotomic order, with cached derived arrays."""

    def __init__(self, md: ModularData):
        self.md = md
        self.M = md.field_order
        self.K = md.rank
        self.S = md.S.embed(self.M)
        self.d = md.dims_array()
        self.theta = md.theta_array()

    @cached_property
    def Sc(self) -> np.ndarray:
        return self.S.to_complex()

    @cached_property
    def global_dim(self) -> CyclotomicNumber:
        return self.md.global_dim

    @cached_property
    def d2(self) -> list:
        """d_X^2 as Fractions, or None where not rational."""
        return [(x * x).is_rational() for x in self.md.dims]

    @cached_property
    def weakly_integral(self) -> bool:
        D = self.global_dim.is_rational()
        return D is not None and D.denominator == 1 and all(v is not None and v.denominator == 1 for v in self.d2)

    @cached_property
    def abs2(self) -> CyclotomicArray:
        return self.S * self.S.conjugate()

    @cached_property
    def zero_mask(self) -> np.ndarray:
        return self.S.is_zero_mask()

    @cached_property
    def maxmod_mask(self) -> np.ndarray:
        """[x, y] is True where |S_xy|^2 == d_y^2."""
        d2 = CyclotomicArray.from_integers(np.array([int(v) for v in self.d2], dtype=object), self.M)
        return (self.abs2 - d2.reshape(1, self.K)).is_zero_mask()


def _first(mask: np.ndarray):
    idx = np.argwhere(mask)
    return [int(i) for i in idx[0]] if len(idx) else None


# -- Verlinde -----------------------------------------------------------------------------


def _verlinde_numeric(v: _View) -> np.ndarray:
    Sc = v.Sc
    K = v.K
    D = complex(v.global_dim.to_complex())
    S0 = Sc[0]
    out = np.empty((K, K, K), dtype=np.complex128)
    W = Sc.conj() / S0[None, :]  # rows z: conj(S_zw) / S_0w
    for x in range(K):
        out[x] = (Sc[x][None, :] * Sc) @ W.T / D
    return out


def _verlinde_certificate(v: _View, N: np.ndarray):
    """First (x, y, w) where sum_z N_xy^z S_zw S_0w != S_xw S_yw, or None."""
    K = v.K
    S = v.S
    S0 = S[0].reshape(1, K)
    chunk = max(1, int(2e7 // max(1, K * K * 2 * S.phi)))
    for x0 in range(0, K, chunk):
        xs = range(x0, min(K, x0 + chunk))
        n = len(xs)
        lhs = S.int_lmul(N[x0 : x0 + n].reshape(n * K, K)) * S0
        rows = CyclotomicArray(S.order, S.num[x0 : x0 + n].copy(), S.den)
        rhs = rows.reshape(n, 1, K) * S.reshape(1, K, K)
        bad = (lhs.reshape(n, K, K) - rhs).is_zero_mask()
        if not bad.all():
            x, y, w = _first(~bad)
            return [x0 + x, y, w]
    return None


def verlinde(md: ModularData, view: _View | None = None) -> tuple[np.ndarray | None, CheckResult]:
    v = view or _View(md)
    Nc = _verlinde_numeric(v)
    N = np.rint(Nc.real).astype(np.int64)
    err = np.abs(Nc - N)
    if (err > 1e-6).any():
        return None, CheckResult("verlinde", False, "fusion coefficients are not integers", _first(err > 1e-6))
    if (N < 0).any():
        return N, CheckResult("verlinde", False, "negative fusion coefficient", _first(N < 0))
    bad = _verlinde_certificate(v, N)
    if bad is not None:
        return None, CheckResult("verlinde", False, "exact Verlinde certificate failed at (x, y, w)", bad)
    return N, CheckResult("verlinde", True, "nonnegative integers, exactly certified")


def verlinde_fusion(md: ModularData) -> np.ndarray:
    N, res = verlinde(md)
    if not res.passed:
        raise ValueError(f"Verlinde fusion failed: {res.detail} at {res.counterexample}")
    return N


# -- axiom suite --------------------------------------------------------------------------


def _balancing(v: _View, N: np.ndarray) -> CheckResult:
    K = v.K
    td = v.theta * v.d
    flat =CyclotomicArray(td.order, td.num.reshape(K, 1, td.phi), td.den).int_lmul(N.reshape(K * K, K))
    tinv = v.theta.conjugate()
    B = flat.reshape(K, K) * tinv.reshape(K, 1) * tinv.reshape(1, K)
    ok = (B - v.S).is_zero_mask()
    if ok.all():
        return CheckResult("balancing", True, "S regenerated exactly from N, theta, d")
    return CheckResult("balancing", False, "balancing equation fails at (x, y)", _first(~ok))


def check_axioms(md: ModularData, checks=None) -> VerificationReport:
    wanted = set(checks) if checks else {"axioms", "verlinde"}
    rep = VerificationReport()
    v = _View(md)
    K = v.K
    S = v.S

    sym = (S.num == S.num.transpose(1, 0, 2)).all(axis=-1)
    rep.add(CheckResult("symmetric", bool(sym.all()), "", None if sym.all() else _first(~sym)))

    unit_row = (S[0] - v.d).is_zero_mask()
    rep.add(CheckResult("unit_row", bool(unit_row.all()), "S[unit] equals the dimensions", None if unit_row.all() else [0, _first(~unit_row)[0]]))

    theta_unit = v.md.theta[0] == 1
    rep.add(CheckResult("unit_twist", bool(theta_unit)))
    roots = [t.root_phase() is not None for t in v.md.theta]
    rep.add(CheckResult("twists_roots_of_unity", all(roots), "", None if all(roots) else roots.index(False)))

    D = v.global_dim
    U = S @ S.conjugate().T
    eye = CyclotomicArray.from_integers(np.eye(K, dtype=np.int64), S.order)
    Dz = CyclotomicArray.from_numbers([D], S.order).reshape(())
    uni = (U - eye * Dz).is_zero_mask()
    rep.add(CheckResult("unitarity", bool(uni.all()), "S S^dagger == dim I", None if uni.all() else _first(~uni)))

    wi = v.weakly_integral
    # informational: non weakly integral data is accepted, the zero checks then skip
    if wi:
        rep.add(CheckResult("weakly_integral", True, "d^2 and dim are rational integers"))
    else:
        rep.add(CheckResult("weakly_integral", False, "not weakly integral: zero-structure checks skipped", skipped=True))

    N = None
    if "verlinde" in wanted or "axioms" in wanted:
        if uni.all() and sym.all():
            N, res = verlinde(md, v)
            rep.add(res)
            if N is not None and res.passed:
                rep.add(_balancing(v, N))
                rr = ring_report(N)
                rep.add(CheckResult("fusion_ring", all(rr.values()), json.dumps(rr)))
        else:
            rep.add(CheckResult("verlinde", False, "skipped: S is not symmetric and unitary"))
    rep.N = N

    # Gauss sums and central charge
    t = v.md.theta
    d2 = [x * x for x in v.md.dims]
    p_plus = sum((a * b for a, b in zip(t, d2)), CyclotomicNumber.zero())
    p_minus = sum((a.conjugate() * b for a, b in zip(t, d2)), CyclotomicNumber.zero())
    rep.add(CheckResult("gauss_product", p_plus * p_minus == D, "p+ p- == dim"))
    rep.derived["global_dim"] = _exact_and_numeric(D)
    rep.derived["p_plus"] = _exact_and_numeric(p_plus)
    rep.derived["p_minus"] = _exact_and_numeric(p_minus)
    Dq = D.is_rational()
    if Dq is not None and Dq.denominator == 1 and Dq > 0:
        zeta = p_plus * sqrt_positive_integer(int(Dq)).inv()
        rep.derived["central_charge"] = _exact_and_numeric(zeta)
        rep.add(CheckResult("central_charge_modulus", zeta.abs_squared() == 1, "|p+ / sqrt(dim)| == 1"))
    else:
        c = p_plus.to_complex() / D.to_complex() ** 0.5
        rep.derived["central_charge"] = {"numeric": [c.real, c.imag]}
        rep.add(CheckResult("central_charge_modulus", abs(abs(c) - 1) < 1e-9, "numeric only: dim is not an integer"))

    if "zeros" in wanted or "thm61" in wanted:
        rep.add(theorem_6_1_check(md, v))
    if "prop62" in wanted:
        rep.add(prop_6_2_check(md, v))
    if "galois" in wanted:
        for i in range(K):
            if v.d2[i] is not None and v.d2[i] > 1:
                rep.add(galois_product_check(md, md.labels[i], v))
    return rep


# -- zero structure --------------------------------------------------------------------------


@dataclass
class ZeroStructure:
    label: str
    T: list
    D: list
    U: list
    dim_T: int
    dim_D: int
    dim_U: int

    def to_json(self):
        return self.__dict__.copy()


def zero_structure(md: ModularData, X, view: _View | None = None) -> ZeroStructure:
    v = view or _View(md)
    if not v.weakly_integral:
        raise ValueError("zero structure needs weakly integral data")
    x = X if isinstance(X, int) else md.index(X)
    unit = md.unit_index()
    zeros = v.zero_mask[x]
    T = [i for i in range(v.K) if zeros[i]]
    Dx = [i for i in range(v.K) if not zeros[i] and i != unit]
    U = [i for i in range(v.K) if v.maxmod_mask[x, i]]
    dsum = lambda idx: int(sum(v.d2[i] for i in idx))
    labs = md.labels
    return ZeroStructure(labs[x], [labs[i] for i in T], [labs[i] for i in Dx], [labs[i] for i in U], dsum(T), dsum(Dx), dsum(U))


def _noninvertible(v: _View) -> list[int]:
    return [i for i in range(v.K) if v.d2[i] is not None and v.d2[i] > 1]


def theorem_6_1_check(md: ModularData, view: _View | None = None) -> CheckResult:
    v = view or _View(md)
    if not v.weakly_integral:
        return CheckResult("theorem_6_1", True, "skipped: data is not weakly integral", skipped=True)
    for x in _noninvertible(v):
        z = zero_structure(md, x, v)
        if not z.T:
            return CheckResult("theorem_6_1", False, "row of a non-invertible object has no zero", md.labels[x])
        if z.dim_T < v.d2[x] - 1:
            return CheckResult("theorem_6_1", False, "dim(T_X) < d_X^2 - 1", md.labels[x])
    return CheckResult("theorem_6_1", True, f"{len(_noninvertible(v))} non-invertible rows each contain a zero")


def prop_6_2_check(md: ModularData, view: _View | None = None) -> CheckResult:
    v = view or _View(md)
    if not v.weakly_integral:
        return CheckResult("prop_6_2", True, "skipped: data is not weakly integral", skipped=True)
    D = int(v.global_dim.is_rational())
    for x in _noninvertible(v):
        z = zero_structure(md, x, v)
        if not 3 * z.dim_T + z.dim_U > D:
            return CheckResult("prop_6_2", False, f"3 dim T + dim U = {3 * z.dim_T + z.dim_U} <= {D}", md.labels[x])
    return CheckResult("prop_6_2", True, "3 dim(T_X) + dim(U_X) > dim for every non-invertible X")


def galois_product_check(md: ModularData, X, view: _View | None = None) -> CheckResult:
    v = view or _View(md)
    x = X if isinstance(X, int) else md.index(X)
    z = zero_structure(md, x, v)
    prod = CyclotomicNumber.one()
    for lab in z.D:
        y = md.index(lab)
        q = v.abs2[x, y] * (1 / Fraction(v.d2[y]))
        prod = prod * q ** int(v.d2[y])
    r = prod.is_rational()
    name = f"galois_product[{md.labels[x]}]"
    if r is None:
        return CheckResult(name, False, "product is not rational")
    if r < 1:
        return CheckResult(name, False, f"product {r} < 1")
    return CheckResult(name, True, f"product = {r}")
