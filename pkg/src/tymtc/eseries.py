"""The modular categories E(q, +-) for a nondegenerate quadratic form q on an odd group.

Simples: 1 = X+, X-, Y(a) for a != 0 up to sign, Z0, Z1 with dims 1, 1, 2, sqrt(n), sqrt(n).
S and T are closed form:
    S[X+-, X+-] = 1, S[X+-, Y] = 2, S[X+, Z] = sqrt(n), S[X-, Z] = -sqrt(n),
    S[Y_a, Y_b] = 2 (chi(a, b)^2 + chi(a, b)^-2), S[Y, Z] = 0,
    S[Z_l, Z_l] = sign r sqrt(n), S[Z_l, Z_l+1] = -sign r sqrt(n),
with r = sum q^2 / sum q in {+1, -1}; T = 1, 1, q(a)^2, Delta_0, Delta_1 where
Delta_l are the square roots of sign * sum q / sqrt(n).
"""

from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from math import lcm

import numpy as np

from .abelian import FiniteAbelianGroup, check_order_bound, make_group
from .cyclotomic import CyclotomicArray, CyclotomicNumber, _field, root_of_unity, sqrt_positive_integer, sqrt_root_of_unity
from .errors import InvariantViolation
from .forms import QuadraticForm, gauss_ratio_sign, gauss_sum, parse_form_spec, quadratic_from_bicharacter
from .modular_data import ModularData


@dataclass(frozen=True)
class EX:
    sign: int

    def __str__(self):
        return "1" if self.sign > 0 else "X-"


@dataclass(frozen=True)
class EY:
    a: tuple  # canonical representative min(a, -a)

    def __str__(self):
        return "Y(" + ",".join(str(x) for x in self.a) + ")"


@dataclass(frozen=True)
class EZ:
    l: int

    def __str__(self):
        return f"Z{self.l}"


class ECategory:
    def __init__(self, q: QuadraticForm, sign: int = 1):
        g = q.group
        if g.order % 2 == 0:
            raise ValueError(f"E(q, +-) needs a group of odd order, got |A| = {g.order}")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        check_order_bound(g)
        q.validate()
        chi = q.associated
        chi.require_nondegenerate()
        self.group: FiniteAbelianGroup = g
        self.q = q
        self.chi = chi
        self.sign = sign

    @classmethod
    def from_spec(cls, group: str | FiniteAbelianGroup, form: str, sign: int = 1) -> "ECategory":
        from .abelian import parse_group

        g = parse_group(group) if isinstance(group, str) else group
        if g.order % 2 == 0:
            raise ValueError(f"E(q, +-) needs a group of odd order, got |A| = {g.order}")
        chi, q = parse_form_spec(g, form)
        return cls(q if q is not None else quadratic_from_bicharacter(chi), sign)

    @property
    def n(self) -> int:
        return self.group.order

    def __repr__(self):
        return f"E({self.group}, {'+' if self.sign > 0 else '-'})"

    @cached_property
    def sqrt_n(self) -> CyclotomicNumber:
        return sqrt_positive_integer(self.n)

    @cached_property
    def gauss(self) -> CyclotomicNumber:
        return gauss_sum(self.q, 1)

    @cached_property
    def ratio(self) -> int:
        return gauss_ratio_sign(self.q)

    @cached_property
    def deltas(self) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        z = self.gauss * self.sqrt_n.inv() * self.sign
        if z.abs_squared() != 1:
            raise InvariantViolation("sign * sum q / sqrt(n) is not of modulus one")
        d0, d1 = sqrt_root_of_unity(z)
        if d0 == d1:
            raise InvariantViolation("square roots coincide")
        return d0, d1

    @cached_property
    def y_reps(self) -> list[tuple]:
        g = self.group
        reps = sorted({min(a, g.neg(a)) for a in g.elements if any(a)})
        return reps

    @cached_property
    def simples(self) -> list:
        return [EX(1), EX(-1)] + [EY(a) for a in self.y_reps] + [EZ(0), EZ(1)]

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.simples)}

    def canonical_y(self, a) -> EY:
        a = self.group.reduce(a)
        return EY(min(a, self.group.neg(a)))

    def dims(self) -> list:
        k = len(self.y_reps)
        one = CyclotomicNumber.one()
        return [one, one] + [CyclotomicNumber.from_rational(2)] * k + [self.sqrt_n] * 2


def e_simples(e: ECategory) -> list:
    return e.simples


# -- fusion ---------------------------------------------------------------------------------


def e_fusion(e: ECategory, u, v) -> list:
    """The closed-form fusion rules, as a sorted multiset of labels."""
    g = e.group
    allY = [EY(a) for a in e.y_reps]
    if isinstance(v, EX) and not isinstance(u, EX):
        u, v = v, u
    if isinstance(v, EY) and isinstance(u, EZ):
        u, v = v, u
    if isinstance(u, EX):
        if isinstance(v, EX):
            out = [EX(u.sign * v.sign)]
        elif isinstance(v, EY):
            out = [v]
        else:
            out = [v if u.sign > 0 else EZ(1 - v.l)]
    elif isinstance(u, EY) and isinstance(v, EY):
        a, b = u.a, v.a
        if a == b:
            out = [EX(1), EX(-1), e.canonical_y(g.add(a, a))]
        else:
            out = [e.canonical_y(g.add(a, b)), e.canonical_y(g.sub(a, b))]
    elif isinstance(u, EY):
        out = [EZ(0), EZ(1)]
    else:
        out = [EX(1) if u.l == v.l else EX(-1)] + allY
    return sorted(out, key=e._index.__getitem__)


def e_fusion_tensor(e: ECategory) -> np.ndarray:
    K = len(e.simples)
    N = np.zeros((K, K, K), dtype=np.int64)
    idx = e._index
    for i, u in enumerate(e.simples):
        for j, v in enumerate(e.simples):
            for w in e_fusion(e, u, v):
                N[i, j, idx[w]] += 1
    return N


# -- modular data ---------------------------------------------------------------------------


def e_modular_data(e: ECategory) -> ModularData:
    g = e.group
    L = e.chi.order
    d0, d1 = e.deltas
    M = lcm(e.sqrt_n.order, L, d0.order, d1.order, 4)
    k = len(e.y_reps)
    K = 4 + k
    sqa = CyclotomicArray.from_numbers([e.sqrt_n], M)
    if sqa.den != 1:
        raise InvariantViolation("sqrt(n) should have integral coefficients")
    sq = sqa.num[0]
    phi = _field(M).phi
    num = np.zeros((K, K, phi), dtype=np.int64)
    one = np.zeros(phi, dtype=np.int64)
    one[0] = 1
    num[:2, :2] = one
    num[:2, 2 : 2 + k] = 2 * one
    num[2 : 2 + k, :2] = 2 * one
    z0, z1 = 2 + k, 3 + k
    for row, s in ((0, 1), (1, -1)):
        num[row, z0:] = s * sq
        num[z0:, row] = s * sq
    ya = np.array([g.index(a) for a in e.y_reps], dtype=np.int64)
    c2 = 2 * e.chi.phases_over(M)[np.ix_(ya, ya)]
    yy = CyclotomicArray.from_phases(c2, M).num + CyclotomicArray.from_phases(-c2, M).num
    num[2 : 2 + k, 2 : 2 + k] = 2 * yy
    diag = e.sign * e.ratio
    num[z0, z0] = num[z1, z1] = diag * sq
    num[z0, z1] = num[z1, z0] = -diag * sq
    S = CyclotomicArray(M, num)
    theta = [CyclotomicNumber.one(), CyclotomicNumber.one()]
    theta += [e.q(a) ** 2 for a in e.y_reps]
    theta += [d0, d1]
    meta = {
        "kind": "eseries",
        "group": list(g.invariant_factors),
        "sign": "+" if e.sign > 0 else "-",
        "gauss_ratio": e.ratio,
    }
    return ModularData([str(s) for s in e.simples], e.dims(), theta, S, meta)


def e_central_charge(e: ECategory) -> CyclotomicNumber:
    md = e_modular_data(e)
    p = sum((t * d * d for t, d in zip(md.theta, md.dims)), CyclotomicNumber.zero())
    zeta = p * sqrt_positive_integer(4 * e.n).inv()
    if zeta.abs_squared() != 1:
        raise InvariantViolation("central charge is not of modulus one")
    return zeta


# -- golden tables ---------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def eval_entry(expr: str, p: int, s: int) -> CyclotomicNumber:
    """Evaluate a golden-table entry. Names: xi = exp(2 pi i / p), i, s (the sign); sqrt(k); ^ or ** for powers."""
    names = {"xi": root_of_unity(p, 1), "i": root_of_unity(4, 1), "s": CyclotomicNumber.from_rational(s)}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return CyclotomicNumber.from_rational(node.value)
        if isinstance(node, ast.Name) and node.id in names:
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, (ast.Pow, ast.BitXor)):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError(f"exponent must be an integer literal in {expr!r}")
                return ev(node.left) ** node.right.value
            if type(node.op) in _BINOPS:
                return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
            arg = node.args[0]
            if isinstance(arg, ast.Constant) and isinstance(arg.value, int):
                return sqrt_positive_integer(arg.value)
        raise ValueError(f"unsupported golden expression {expr!r}")

    return ev(ast.parse(str(expr), mode="eval"))


CASES = ("5.3a", "5.3b", "5.4a", "5.4b", "5.4c", "5.4d")


def load_golden(case: str) -> dict:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {', '.join(CASES)}")
    text = resources.files("tymtc").joinpath("golden", f"{case}.json").read_text(encoding="utf-8")
    return json.loads(text)


def golden_tables(case: str, sign: int) -> dict:
    gold = load_golden(case)
    p = gold["xi_order"]
    key = "+" if sign > 0 else "-"
    S = [[eval_entry(x, p, sign) for x in row] for row in gold["S"]]
    T = [eval_entry(x, p, sign) for x in gold["T"][key]]
    zeta = eval_entry(gold["central_charge"], p, sign)
    return {"labels": gold["labels"], "S": S, "T": T, "central_charge": zeta, "meta": gold}


def case_category(case: str, sign: int) -> ECategory:
    gold = load_golden(case)
    return ECategory.from_spec(make_group(gold["group"]), gold["q"], sign)


@dataclass
class ReproductionReport:
    case: str
    sign: int
    match: bool
    z_swapped: bool
    caveats: list
    first_mismatch: dict | None
    central_charge: CyclotomicNumber
    central_charge_golden: CyclotomicNumber
    labels: list

    @property
    def central_charge_matches(self) -> bool:
        return self.central_charge == self.central_charge_golden

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "tau": "+" if self.sign > 0 else "-",
            "match": self.match,
            "z_swapped": self.z_swapped,
            "caveats": self.caveats,
            "first_mismatch": self.first_mismatch,
            "central_charge": self.central_charge.to_json(),
            "central_charge_golden": self.central_charge_golden.to_json(),
            "central_charge_matches": self.central_charge_matches,
        }


def _compare(md: ModularData, order: list[int], S_gold, T_gold, conj_y: bool, y_rows: set):
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            if md.S[a, b] != S_gold[i][j]:
                return {"matrix": "S", "entry": [md.labels[a], md.labels[b]], "computed": md.S[a, b].to_json(), "golden": S_gold[i][j].to_json()}
    for i, a in enumerate(order):
        want = T_gold[i].conjugate() if conj_y and i in y_rows else T_gold[i]
        if md.theta[a] != want:
            return {"matrix": "T", "entry": [md.labels[a]], "computed": md.theta[a].to_json(), "golden": T_gold[i].to_json()}
    return None


def reproduce_example(case: str, sign: int) -> ReproductionReport:
    gold = golden_tables(case, sign)
    e = case_category(case, sign)
    md = e_modular_data(e)
    meta = gold["meta"]
    labels = gold["labels"]
    if sorted(labels) != sorted(md.labels):
        raise InvariantViolation(f"golden labels {labels} do not match computed {md.labels}")
    order = [md.index(x) for x in labels]
    conj_y = bool(meta.get("conjugate_Y_twists"))
    y_rows = {i for i, lab in enumerate(labels) if lab.startswith("Y")}
    caveats = list(meta.get("notes", []))
    if conj_y:
        caveats.append("Y twists compared after complex conjugation of the printed values")
    bad = _compare(md, order, gold["S"], gold["T"], conj_y, y_rows)
    swapped = False
    if bad is not None:
        zi = [i for i, lab in enumerate(labels) if lab.startswith("Z")]
        alt = list(order)
        alt[zi[0]], alt[zi[1]] = order[zi[1]], order[zi[0]]
        bad2 = _compare(md, alt, gold["S"], gold["T"], conj_y, y_rows)
        if bad2 is None:
            swapped, bad = True, None
            caveats.append("Z0 and Z1 exchanged relative to the printed order")
    return ReproductionReport(case, sign, bad is None, swapped, caveats, bad, e_central_charge(e), gold["central_charge"], labels)
