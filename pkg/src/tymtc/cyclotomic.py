"""Exact arithmetic in cyclotomic fields Q(zeta_M).

An element of Q(zeta_M) is stored as an integer numerator vector of length
phi(M) together with a positive common denominator, i.e. the rational
polynomial sum_i (num_i / den) zeta_M^i reduced modulo the M-th cyclotomic
polynomial.  Reduction goes through a per-order table whose row k holds
x^k mod Phi_M, so multiplying two elements is a convolution followed by one
small matrix product.

Roots of unity remember their phase (a Fraction in [0, 1)), which makes
products, inverses and Galois images of roots of unity table lookups.

Two containers are provided: the scalar ``CyclotomicNumber`` and the bulk
``CyclotomicArray`` (numerators of shape ``(..., phi)`` with a single common
denominator) used for S-matrix algebra.
"""

from __future__ import annotations

import cmath
import math
import os
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm

import numpy as np

from .errors import InvariantViolation, ResourceBoundError

DEFAULT_MAX_FIELD_ORDER = 10**6
_TABLE_LIMIT = 4096
_FLOAT_EXACT = 2**53
_INT64_SAFE = 2**62


def max_field_order() -> int:
    value = os.environ.get("MTC_MAX_FIELD_ORDER")
    return int(value) if value else DEFAULT_MAX_FIELD_ORDER


# -- number theory helpers -----------------------------------------------------


def _factor(n: int) -> dict[int, int]:
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


def totient(n: int) -> int:
    result = n
    for p in _factor(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    f = _factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


# -- polynomials -------------------------------------------------------------


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (low-to-high), den monic."""
    num = list(num)
    dn = len(den) - 1
    q = [0] * (len(num) - dn)
    for k in range(len(num) - 1, dn - 1, -1):
        c = num[k]
        if c:
            q[k - dn] = c
            for j in range(dn + 1):
                num[k - dn + j] -= c * den[j]
    if any(num[:dn]):
        raise InvariantViolation("inexact polynomial division")
    return q


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(M: int) -> tuple[int, ...]:
    """Coefficients (low to high) of Phi_M = prod_{d | M} (x^d - 1)^mu(M/d)."""
    if M < 1:
        raise ValueError("order must be positive")
    ups = [d for d in divisors(M) if mobius(M // d) == 1]
    downs = [d for d in divisors(M) if mobius(M // d) == -1]
    poly = [1]
    for d in ups:
        # times (x^d - 1)
        out = [0] * (len(poly) + d)
        for i, c in enumerate(poly):
            out[i + d] += c
            out[i] -= c
        poly = out
    for d in downs:
        # exact division by (x^d - 1), from the top
        n = len(poly) - d
        q = [0] * n
        for k in range(n - 1, -1, -1):
            q[k] = poly[k + d] + (q[k + d] if k + d < n else 0)
        poly = q
    return tuple(poly)


# -- exact integer array kernels ---------------------------------------------------


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def _compact(a: np.ndarray) -> np.ndarray:
    """Downcast an object integer array to int64 when every entry fits."""
    if a.dtype == object and _maxabs(a) < _INT64_SAFE:
        return a.astype(np.int64)
    return a


def _promote(a: np.ndarray) -> np.ndarray:
    return a if a.dtype == object else a.astype(object)


def int_matmul(a: np.ndarray, b: np.ndarray, b_max: int | None = None) -> np.ndarray:
    """Exact integer matrix product choosing float64 BLAS, int64 or Python ints by a bound."""
    inner = a.shape[-1]
    bound = _maxabs(a) * (_maxabs(b) if b_max is None else b_max) * max(inner, 1)
    if bound < _FLOAT_EXACT:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    if bound < _INT64_SAFE and a.dtype != object and b.dtype != object:
        return a @ b
    return _compact(_promote(a) @ _promote(b))


def _int_scale(a: np.ndarray, k: int) -> np.ndarray:
    if k == 1:
        return a
    if _maxabs(a) * abs(k) < _INT64_SAFE and a.dtype != object:
        return a * k
    return _compact(_promote(a) * k)


def _int_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < _INT64_SAFE:
        return a + b
    return _compact(_promote(a) + _promote(b))


def _array_gcd(a: np.ndarray, den: int) -> int:
    if a.dtype == object:
        return reduce(gcd, (int(x) for x in a.flat), den)
    if a.size == 0:
        return den
    return gcd(int(np.gcd.reduce(a, axis=None)), den)


# -- fields ------------------------------------------------------------------------


class _Field:
    """Per-order data: Phi_M and the reduction table x^k mod Phi_M for 0 <= k < M."""

    def __init__(self, M: int):
        if M > max_field_order():
            raise ResourceBoundError(f"cyclotomic order {M} exceeds the configured maximum {max_field_order()}")
        self.M = M
        self.poly = cyclotomic_polynomial(M)
        self.phi = len(self.poly) - 1
        self._table = None
        self._table_max = 0

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self.M > _TABLE_LIMIT:
                raise ResourceBoundError(f"cyclotomic order {self.M} too large for table reduction")
            phi, M = self.phi, self.M
            grow = 1 + max((abs(c) for c in self.poly[:phi]), default=0)
            low = np.array(self.poly[:phi], dtype=np.int64)
            rows = np.zeros((M, phi), dtype=np.int64)
            rows[:phi] = np.eye(phi, dtype=np.int64)
            big = 0
            for k in range(phi, M):
                prev = rows[k - 1]
                if rows.dtype != object:
                    big = max(big, int(np.abs(prev).max()))
                    if big * grow >= _INT64_SAFE:
                        rows, low = rows.astype(object), low.astype(object)
                        prev = rows[k - 1]
                top = prev[phi - 1]
                rows[k, 1:] = prev[:-1]
                rows[k, 0] = 0
                if top:
                    rows[k] -= top * low
            self._table = _compact(rows)
            self._table.setflags(write=False)
            self._table_max = _maxabs(self._table)
        return self._table

    def reduce(self, c: np.ndarray) -> np.ndarray:
        """Reduce integer coefficient arrays (..., L) in Z[x] to (..., phi) mod Phi_M."""
        L = c.shape[-1]
        M = self.M
        if L > M:
            pad = (-L) % M
            if pad:
                c = np.concatenate([c, np.zeros(c.shape[:-1] + (pad,), dtype=c.dtype)], axis=-1)
            c = c.reshape(c.shape[:-1] + (-1, M))
            c = _compact(c.sum(axis=-2)) if c.dtype == object else c.sum(axis=-2)
            L = M
        if L <= self.phi:
            if L == self.phi:
                return c
            pad = np.zeros(c.shape[:-1] + (self.phi - L,), dtype=c.dtype)
            return np.concatenate([c, pad], axis=-1)
        if M > _TABLE_LIMIT:
            return self._reduce_division(c)
        flat = c.reshape(-1, L)
        tab = self.table
        out = int_matmul(flat, tab[:L], self._table_max)
        return out.reshape(c.shape[:-1] + (self.phi,))

    def _reduce_division(self, c: np.ndarray) -> np.ndarray:
        c = _promote(c).copy()
        low = np.array(self.poly[: self.phi], dtype=object)
        phi = self.phi
        for k in range(c.shape[-1] - 1, phi - 1, -1):
            top = c[..., k].copy()
            c[..., k - phi : k] -= top[..., None] * low
        return _compact(c[..., :phi])

    def monomial(self, k: int) -> np.ndarray:
        k %= self.M
        if self.M <= _TABLE_LIMIT:
            return self.table[k]
        v = np.zeros(k + 1, dtype=np.int64)
        v[k] = 1
        return self.reduce(v)


@lru_cache(maxsize=None)
def _field(M: int) -> _Field:
    return _Field(M)


def _ramanujan_sum(M: int, i: int) -> int:
    g = gcd(i, M)
    m = M // g
    return mobius(m) * totient(M) // totient(m)


@lru_cache(maxsize=None)
def _trace_weights(M: int) -> tuple[int, ...]:
    return tuple(_ramanujan_sum(M, i) for i in range(_field(M).phi))


def _lift(num: np.ndarray, M: int, M2: int) -> np.ndarray:
    """Scatter coefficients of zeta_M^i to exponent i*(M2/M) in a length-M2 vector."""
    step = M2 // M
    out = np.zeros(num.shape[:-1] + (M2,), dtype=num.dtype)
    out[..., : num.shape[-1] * step : step] = num
    return out


def _galois_scatter(num: np.ndarray, M: int, k: int) -> np.ndarray:
    phi = num.shape[-1]
    idx = (np.arange(phi) * k) % M
    out = np.zeros(num.shape[:-1] + (M,), dtype=num.dtype)
    # idx entries are distinct because gcd(k, M) = 1
    out[..., idx] = num
    return out


# -- scalars ---------------------------------------------------------------------------


def _to_fraction(r) -> Fraction:
    if isinstance(r, Fraction):
        return r
    if isinstance(r, (int, np.integer)):
        return Fraction(int(r))
    if isinstance(r, str):
        return Fraction(r)
    raise TypeError(f"cannot interpret {r!r} as an exact rational")


class CyclotomicNumber:
    """An exact element of Q(zeta_M)."""

    __slots__ = ("order", "_num", "_den", "_phase", "_hash")

    def __init__(self, order: int, num, den: int = 1, phase: Fraction | None = None, _normalized: bool = False):
        if order < 1:
            raise ValueError("order must be positive")
        num = tuple(int(x) for x in num)
        if len(num) != _field(order).phi:
            raise ValueError(f"expected {_field(order).phi} coefficients for order {order}, got {len(num)}")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if den < 0:
                num, den = tuple(-x for x in num), -den
            g = gcd(den, *num)
            if g > 1:
                num, den = tuple(x // g for x in num), den // g
        self.order = order
        self._num = num
        self._den = den
        self._phase = phase
        self._hash = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def _from_array(cls, order: int, arr: np.ndarray, den: int = 1, phase=None) -> "CyclotomicNumber":
        return cls(order, arr.tolist(), den, phase)

    @classmethod
    def from_coeffs(cls, order: int, coeffs) -> "CyclotomicNumber":
        """From rational coefficients of 1, zeta, zeta^2, ... (any length; reduced mod Phi_M)."""
        fr = [_to_fraction(c) for c in coeffs]
        den = reduce(lcm, (f.denominator for f in fr), 1)
        ints = np.array([f.numerator * (den // f.denominator) for f in fr] or [0], dtype=object)
        return cls._from_array(order, _field(order).reduce(_compact(ints)), den)

    @classmethod
    def from_rational(cls, r, order: int = 1) -> "CyclotomicNumber":
        r = _to_fraction(r)
        phi = _field(order).phi
        phase = None
        if r == 1:
            phase = Fraction(0)
        elif r == -1:
            phase = Fraction(1, 2)
        return cls(order, (r.numerator,) + (0,) * (phi - 1), r.denominator, phase if order % 2 == 0 or r == 1 else None)

    @classmethod
    def root_of_unity(cls, M: int, k: int = 1) -> "CyclotomicNumber":
        return cls.from_phase(Fraction(k, M), M)

    @classmethod
    def from_phase(cls, phase, order: int | None = None) -> "CyclotomicNumber":
        """exp(2 pi i phase) for a rational phase, in Q(zeta_order) (default: reduced denominator)."""
        phase = _to_fraction(phase) % 1
        if order is None:
            order = phase.denominator
        elif order % phase.denominator:
            if order % 2 == 0 or (2 * order) % phase.denominator:
                raise ValueError(f"phase {phase} is not an {order}-th root of unity")
            # odd order: zeta_{2M} = -zeta_M^((M + 1) / 2)
            k = phase.numerator * (2 * order // phase.denominator)
            F = _field(order)
            mono = F.monomial(k * (order + 1) // 2)
            coeffs = (-mono if k % 2 else mono).tolist()
            return cls(order, coeffs, 1, phase, _normalized=True)
        F = _field(order)
        k = phase.numerator * (order // phase.denominator)
        return cls(order, F.monomial(k).tolist(), 1, phase, _normalized=True)

    @classmethod
    def zero(cls, order: int = 1) -> "CyclotomicNumber":
        return cls(order, (0,) * _field(order).phi, 1, None, _normalized=True)

    @classmethod
    def one(cls, order: int = 1) -> "CyclotomicNumber":
        return cls.from_phase(Fraction(0), order)

    # -- accessors ----------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def phi(self) -> int:
        return len(self._num)

    def _array(self) -> np.ndarray:
        m = max((abs(x) for x in self._num), default=0)
        return np.array(self._num, dtype=np.int64 if m < _INT64_SAFE else object)

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self):
        return not self.is_zero()

    # -- embedding -------------------------------------------------------------------

    def embed(self, M2: int) -> "CyclotomicNumber":
        if M2 % self.order:
            raise ValueError(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{M2})")
        if M2 == self.order:
            return self
        if self._phase is not None:
            return CyclotomicNumber.from_phase(self._phase, M2)
        arr = _field(M2).reduce(_lift(self._array(), self.order, M2))
        return CyclotomicNumber._from_array(M2, arr, self._den)

    @staticmethod
    def _coerce(x) -> "CyclotomicNumber":
        if isinstance(x, CyclotomicNumber):
            return x
        return CyclotomicNumber.from_rational(_to_fraction(x))

    def _common(self, other):
        other = CyclotomicNumber._coerce(other)
        if other.order == self.order:
            return self, other
        M = lcm(self.order, other.order)
        return self.embed(M), other.embed(M)

    # -- ring operations ---------------------------------------------------------------

    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        l = lcm(a._den, b._den)
        num = tuple(x * (l // a._den) + y * (l // b._den) for x, y in zip(a._num, b._num))
        return CyclotomicNumber(a.order, num, l)

    __radd__ = __add__

    def __neg__(self):
        phase = None if self._phase is None or self.order % 2 else (self._phase + Fraction(1, 2)) % 1
        return CyclotomicNumber(self.order, tuple(-x for x in self._num), self._den, phase, _normalized=True)

    def __sub__(self, other):
        try:
            return self + (-CyclotomicNumber._coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        if a._phase is not None and b._phase is not None:
            return CyclotomicNumber.from_phase(a._phase + b._phase, a.order)
        if b.phi == 1 or not any(b._num[1:]):
            # rational times anything: scale the numerators
            c = b._num[0]
            return CyclotomicNumber(a.order, tuple(x * c for x in a._num), a._den * b._den)
        if not any(a._num[1:]):
            return b * a
        x, y = a._array(), b._array()
        if x.dtype == object or y.dtype == object or _maxabs(x) * _maxabs(y) * len(x) >= _INT64_SAFE:
            prod = np.convolve(_promote(x), _promote(y))
        else:
            prod = np.convolve(x, y)
        arr = _field(a.order).reduce(_compact(prod))
        return CyclotomicNumber._from_array(a.order, arr, a._den * b._den)

    __rmul__ = __mul__

    def inv(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self._phase is not None:
            return CyclotomicNumber.from_phase(-self._phase, self.order)
        if not any(self._num[1:]):
            return CyclotomicNumber.from_rational(Fraction(self._den, self._num[0]), self.order)
        integral = CyclotomicNumber(self.order, self._num, 1, _normalized=True)
        cof = _norm_cofactor(integral)
        norm = (integral * cof).is_rational()
        if norm is None or norm == 0:
            raise InvariantViolation("Galois norm is not a nonzero rational")
        return CyclotomicNumber(self.order, cof._num, cof._den * norm.numerator) * Fraction(self._den * norm.denominator)

    def __truediv__(self, other):
        try:
            other = CyclotomicNumber._coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return CyclotomicNumber._coerce(other) * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        k = int(k)
        if self._phase is not None:
            return CyclotomicNumber.from_phase(self._phase * k, self.order)
        base = self if k >= 0 else self.inv()
        k = abs(k)
        result = CyclotomicNumber.one(self.order)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- equality and hashing -------------------------------------------------------------

    def __eq__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return a._den == b._den and a._num == b._num

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def normalized_trace(self) -> Fraction:
        """Tr(z) / phi(M); invariant under embedding, so usable as a hash key."""
        w = _trace_weights(self.order)
        return Fraction(sum(x * t for x, t in zip(self._num, w)), self._den * totient(self.order))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    # -- Galois action ------------------------------------------------------------------

    def galois(self, k: int) -> "CyclotomicNumber":
        M = self.order
        if gcd(k, M) != 1:
            raise ValueError(f"Galois exponent {k} is not coprime to {M}")
        if self._phase is not None:
            return CyclotomicNumber.from_phase(self._phase * k, M)
        if M <= 2:
            return self
        arr = _field(M).reduce(_galois_scatter(self._array(), M, k % M))
        return CyclotomicNumber._from_array(M, arr, self._den)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def abs_squared(self) -> "CyclotomicNumber":
        return self * self.conjugate()

    def is_rational(self) -> Fraction | None:
        if any(self._num[1:]):
            return None
        return Fraction(self._num[0], self._den)

    # -- roots of unity -------------------------------------------------------------------

    def root_phase(self) -> Fraction | None:
        """The phase t with z = exp(2 pi i t) if z is a root of unity, else None."""
        if self._phase is not None:
            return self._phase
        if self.abs_squared() != 1:
            return None
        L = lcm(2, self.order)
        w = self.to_complex()
        k = round(cmath.phase(w) / (2 * math.pi) * L) % L
        candidate = CyclotomicNumber.from_phase(Fraction(k, L), L)
        if candidate == self:
            self._phase = Fraction(k, L)
            return self._phase
        return None

    def order_as_root_of_unity(self) -> int | None:
        t = self.root_phase()
        return None if t is None else t.denominator

    # -- numerics ---------------------------------------------------------------------------

    def to_complex(self, digits: int = 15) -> complex:
        if digits > 15:
            import mpmath

            with mpmath.workdps(digits + 10):
                z = mpmath.mpc(0)
                for i, x in enumerate(self._num):
                    if x:
                        z += mpmath.mpf(x) * mpmath.expjpi(mpmath.mpf(2 * i) / self.order)
                z /= self._den
                return z
        if self._phase is not None:
            return cmath.exp(2j * math.pi * float(self._phase))
        M = self.order
        total = 0j
        for i, x in enumerate(self._num):
            if x:
                total += x * cmath.exp(2j * math.pi * i / M)
        return total / self._den

    def __complex__(self):
        return complex(self.to_complex())

    # -- serialization -----------------------------------------------------------------------

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "CyclotomicNumber":
        return cls.from_coeffs(int(obj["order"]), [Fraction(c) for c in obj["coeffs"]])

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        body = " + ".join(terms) if terms else "0"
        return f"Cyc{self.order}({body})"


@lru_cache(maxsize=None)
def _galois_chain(M: int) -> tuple[tuple[int, int], ...]:
    """Generators g_k with indices r_k building (Z/M)^* as a chain of subgroups."""
    units = [k for k in range(1, M) if gcd(k, M) == 1] or [1]
    H = {1 % M}
    chain = []
    for g in units:
        if g in H:
            continue
        r, x = 1, g
        while x not in H:
            x = x * g % M
            r += 1
        chain.append((g, r))
        H = {h * pow(g, j, M) % M for h in H for j in range(r)}
    return tuple(chain)


def _norm_cofactor(z: "CyclotomicNumber") -> "CyclotomicNumber":
    """The product of all nontrivial Galois conjugates of z."""
    u = z
    cof = CyclotomicNumber.one(z.order)
    M = z.order
    for g, r in _galois_chain(M):
        c = _orbit_product(u, g, r - 1, M).galois(g) if r > 1 else CyclotomicNumber.one(M)
        cof = cof * c
        u = u * c
    return cof


def _orbit_product(u: "CyclotomicNumber", g: int, t: int, M: int) -> "CyclotomicNumber":
    """u * sigma_g(u) * ... * sigma_g^(t-1)(u), by binary doubling."""
    p, n = u, 1
    for bit in bin(t)[3:]:
        p = p * p.galois(pow(g, n, M))
        n *= 2
        if bit == "1":
            p = u * p.galois(g)
            n += 1
    return p


# -- module-level functions used by the rest of the package --------------------------------


def root_of_unity(M: int, k: int = 1) -> CyclotomicNumber:
    return CyclotomicNumber.root_of_unity(M, k)


def from_rational(r, order: int = 1) -> CyclotomicNumber:
    return CyclotomicNumber.from_rational(r, order)


def embed(z: CyclotomicNumber, M2: int) -> CyclotomicNumber:
    return z.embed(M2)


def conjugate(z: CyclotomicNumber) -> CyclotomicNumber:
    return z.conjugate()


def galois(z: CyclotomicNumber, k: int) -> CyclotomicNumber:
    return z.galois(k)


def abs_squared(z: CyclotomicNumber) -> CyclotomicNumber:
    return z.abs_squared()


def is_rational(z: CyclotomicNumber) -> Fraction | None:
    return z.is_rational()


def to_complex_approx(z: CyclotomicNumber, digits: int = 12):
    return z.to_complex(digits)


def order_as_root_of_unity(z: CyclotomicNumber) -> int | None:
    return z.order_as_root_of_unity()


def sqrt_root_of_unity(z: CyclotomicNumber) -> tuple[CyclotomicNumber, CyclotomicNumber]:
    """Both square roots of a root of unity, smaller phase first."""
    t = z.root_phase()
    if t is None:
        raise ValueError("sqrt_root_of_unity needs a root of unity")
    m = t.denominator
    M = lcm(z.order, 2 * m)
    r = t / 2
    return CyclotomicNumber.from_phase(r, M), CyclotomicNumber.from_phase(r + Fraction(1, 2), M)


def gauss_sum_prime(p: int, a: int = 1) -> CyclotomicNumber:
    """sum_{x mod p} zeta_p^{a x^2}."""
    F = _field(p)
    counts = np.zeros(p, dtype=np.int64)
    for x in range(p):
        counts[a * x * x % p] += 1
    return CyclotomicNumber._from_array(p, F.reduce(counts))


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CyclotomicNumber:
    if p == 2:
        r = root_of_unity(8, 1) + root_of_unity(8, 7)
    else:
        g = gauss_sum_prime(p)
        r = g if p % 4 == 1 else root_of_unity(4, 3) * g
    if r * r != p:
        raise InvariantViolation(f"square root of {p} failed to square back")
    return r


@lru_cache(maxsize=4096)
def sqrt_positive_integer(n: int) -> CyclotomicNumber:
    """The positive square root of n inside a cyclotomic field."""
    if n < 1:
        raise ValueError("sqrt_positive_integer needs n >= 1")
    s, result = 1, CyclotomicNumber.one()
    for p, e in sorted(_factor(n).items()):
        s *= p ** (e // 2)
        if e % 2:
            result = result * _sqrt_prime(p)
    result = result * s
    if result.to_complex().real < 0:
        result = -result
    return result


# -- bulk arrays ---------------------------------------------------------------------------


class CyclotomicArray:
    """A numpy-backed array of elements of Q(zeta_M) sharing one denominator.

    ``num`` has shape ``shape + (phi(M),)`` and integer dtype (int64, or object
    when entries outgrow 62 bits).
    """

    __array_priority__ = 100

    def __init__(self, order: int, num: np.ndarray, den: int = 1, normalize: bool = True):
        F = _field(order)
        if num.shape[-1] != F.phi:
            raise ValueError("last axis must have length phi(order)")
        self.order = order
        self.num = _compact(num) if num.dtype == object else num.astype(np.int64, copy=False)
        self.den = int(den)
        if normalize:
            self._normalize()

    def _normalize(self):
        if self.den < 0:
            self.num, self.den = -self.num, -self.den
        if self.den != 1:
            g = _array_gcd(self.num, self.den)
            if g > 1:
                self.num = self.num // g
                self.den //= g

    @property
    def shape(self) -> tuple:
        return self.num.shape[:-1]

    @property
    def phi(self) -> int:
        return self.num.shape[-1]

    # -- constructors ----------------------------------------------------------------

    @classmethod
    def zeros(cls, shape, order: int) -> "CyclotomicArray":
        return cls(order, np.zeros(tuple(shape) + (_field(order).phi,), dtype=np.int64))

    @classmethod
    def from_integers(cls, ints, order: int, den: int = 1) -> "CyclotomicArray":
        ints = np.asarray(ints)
        F = _field(order)
        num = np.zeros(ints.shape + (F.phi,), dtype=ints.dtype if ints.dtype == object else np.int64)
        num[..., 0] = ints
        return cls(order, num, den)

    @classmethod
    def from_phases(cls, exps, order: int) -> "CyclotomicArray":
        """Array of roots of unity zeta_order^exps."""
        F = _field(order)
        exps = np.asarray(exps, dtype=np.int64) % order
        return cls(order, F.table[exps].copy(), 1, normalize=False)

    @classmethod
    def from_numbers(cls, values, order: int | None = None) -> "CyclotomicArray":
        """From a (nested) sequence or object array of CyclotomicNumber / rationals."""
        obj = np.empty(np.shape(values) if not isinstance(values, np.ndarray) else values.shape, dtype=object)
        flat = list(np.asarray(values, dtype=object).flat) if obj.size else []
        items = [CyclotomicNumber._coerce(v) for v in flat]
        if order is None:
            order = reduce(lcm, (z.order for z in items), 1)
        items = [z.embed(order) for z in items]
        den = reduce(lcm, (z.denominator for z in items), 1)
        phi = _field(order).phi
        rows = [[x * (den // z.denominator) for x in z.numerators] for z in items]
        num = np.array(rows, dtype=object).reshape(obj.shape + (phi,)) if items else np.zeros(obj.shape + (phi,), dtype=np.int64)
        return cls(order, _compact(num) if num.dtype == object else num, den)

    def copy(self) -> "CyclotomicArray":
        return CyclotomicArray(self.order, self.num.copy(), self.den, normalize=False)

    # -- element access -------------------------------------------------------------

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        sub = self.num[idx + (Ellipsis,)] if Ellipsis not in idx else self.num[idx]
        if sub.ndim == 1:
            return CyclotomicNumber(self.order, sub.tolist(), self.den)
        return CyclotomicArray(self.order, sub.copy(), self.den)

    def __setitem__(self, idx, value):
        value = CyclotomicNumber._coerce(value).embed(self.order)
        l = lcm(self.den, value.denominator)
        if l != self.den:
            self.num = _int_scale(self.num, l // self.den)
            self.den = l
        vals = np.array([x * (l // value.denominator) for x in value.numerators], dtype=object)
        if _maxabs(vals) >= _INT64_SAFE and self.num.dtype != object:
            self.num = self.num.astype(object)
        if not isinstance(idx, tuple):
            idx = (idx,)
        self.num[idx] = vals.astype(self.num.dtype)

    def tolist(self):
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            out[idx] = self[idx]
        return out.tolist()

    def embed(self, M2: int) -> "CyclotomicArray":
        if M2 % self.order:
            raise ValueError(f"cannot embed order {self.order} into {M2}")
        if M2 == self.order:
            return self
        return CyclotomicArray(M2, _field(M2).reduce(_lift(self.num, self.order, M2)), self.den)

    def _common(self, other):
        if isinstance(other, CyclotomicNumber):
            other = CyclotomicArray.from_numbers([other]).reshape(())
        elif not isinstance(other, CyclotomicArray):
            other = CyclotomicArray.from_numbers([CyclotomicNumber._coerce(other)]).reshape(())
        if other.order == self.order:
            return self, other
        M = lcm(self.order, other.order)
        return self.embed(M), other.embed(M)

    def reshape(self, *shape) -> "CyclotomicArray":
        if len(shape) == 1 and isinstance(shape[0], tuple):
            shape = shape[0]
        return CyclotomicArray(self.order, self.num.reshape(tuple(shape) + (self.phi,)), self.den, normalize=False)

    @property
    def T(self) -> "CyclotomicArray":
        return self.transpose()

    def transpose(self) -> "CyclotomicArray":
        nd = len(self.shape)
        axes = tuple(reversed(range(nd))) + (nd,)
        return CyclotomicArray(self.order, self.num.transpose(axes), self.den, normalize=False)

    # -- arithmetic ---------------------------------------------------------------------

    def __add__(self, other):
        a, b = self._common(other)
        l = lcm(a.den, b.den)
        num = _int_add(_int_scale(a.num, l // a.den), _int_scale(b.num, l // b.den))
        return CyclotomicArray(a.order, num, l)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicArray(self.order, -self.num, self.den, normalize=False)

    def __sub__(self, other):
        a, b = self._common(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Elementwise product with numpy broadcasting over the element axes."""
        a, b = self._common(other)
        phi = a.phi
        shape = np.broadcast_shapes(a.shape, b.shape)
        bound = _maxabs(a.num) * _maxabs(b.num) * phi
        if bound < _INT64_SAFE and a.num.dtype != object and b.num.dtype != object:
            dtype = np.int64
            an, bn = a.num, b.num
        else:
            dtype = object
            an, bn = _promote(a.num), _promote(b.num)
        out = np.zeros(shape + (2 * phi - 1,), dtype=dtype)
        for i in range(phi):
            ai = an[..., i : i + 1]
            if ai.dtype != object and not ai.any():
                continue
            out[..., i : i + phi] += ai * bn
        return CyclotomicArray(a.order, _field(a.order).reduce(_compact(out)), a.den * b.den)

    __rmul__ = __mul__

    def __matmul__(self, other) -> "CyclotomicArray":
        """Matrix product over the element axes: (I, J) @ (J, L) -> (I, L)."""
        a, b = self._common(other)
        if len(a.shape) != 2 or len(b.shape) not in (1, 2):
            raise ValueError("matmul expects a matrix on the left and a matrix or vector on the right")
        vec = len(b.shape) == 1
        bn = b.num[:, None, :] if vec else b.num
        I, J = a.shape
        L = bn.shape[1]
        phi = a.phi
        # one product (I*phi, J) @ (J, L*phi); then collect exponent i + j
        A = a.num.transpose(0, 2, 1).reshape(I * phi, J)
        B = bn.reshape(J, L * phi)
        P = int_matmul(A, B).reshape(I, phi, L, phi)
        if P.dtype != object and _maxabs(P) * phi >= _INT64_SAFE:
            P = P.astype(object)
        out = np.zeros((I, L, 2 * phi - 1), dtype=P.dtype)
        for i in range(phi):
            out[:, :, i : i + phi] += P[:, i, :, :]
        res = CyclotomicArray(a.order, _field(a.order).reduce(_compact(out)), a.den * b.den)
        return res.reshape(I) if vec else res

    def int_lmul(self, N: np.ndarray) -> "CyclotomicArray":
        """Integer matrix N (K, I) times self (I, ...) acting on the first element axis."""
        N = np.asarray(N)
        flat = self.num.reshape(self.shape[0], -1)
        out = int_matmul(N, flat)
        return CyclotomicArray(self.order, out.reshape((N.shape[0],) + self.num.shape[1:]), self.den)

    def scale(self, r) -> "CyclotomicArray":
        r = _to_fraction(r)
        return CyclotomicArray(self.order, _int_scale(self.num, r.numerator), self.den * r.denominator)

    def sum(self, axis=None) -> "CyclotomicArray | CyclotomicNumber":
        nd = len(self.shape)
        if axis is None:
            num = self.num.reshape(-1, self.phi).sum(axis=0)
            return CyclotomicNumber(self.order, num.tolist(), self.den)
        axis = axis % nd
        return CyclotomicArray(self.order, self.num.sum(axis=axis), self.den)

    def galois(self, k: int) -> "CyclotomicArray":
        M = self.order
        if gcd(k, M) != 1:
            raise ValueError(f"Galois exponent {k} is not coprime to {M}")
        if M <= 2:
            return self
        return CyclotomicArray(M, _field(M).reduce(_galois_scatter(self.num, M, k % M)), self.den, normalize=False)

    def conjugate(self) -> "CyclotomicArray":
        return self.galois(-1)

    # -- comparisons -------------------------------------------------------------------

    def is_zero_mask(self) -> np.ndarray:
        return ~np.any(self.num != 0, axis=-1)

    def equals(self, other) -> bool:
        a, b = self._common(other)
        if a.shape != b.shape and b.shape != ():
            return False
        return bool(a.is_zero_mask_of_diff(b).all())

    def is_zero_mask_of_diff(self, other) -> np.ndarray:
        return (self - other).is_zero_mask()

    def to_complex(self) -> np.ndarray:
        M = self.order
        w = np.exp(2j * np.pi * np.arange(self.phi) / M)
        num = self.num.astype(np.float64) if self.num.dtype != object else np.vectorize(float)(self.num)
        return (num @ w) / self.den

    def __repr__(self):
        return f"CyclotomicArray(order={self.order}, shape={self.shape}, den={self.den})"
