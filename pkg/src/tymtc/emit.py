"""Rendering of modular data as JSON, CSV, LaTeX and plain text."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from math import gcd

from .cyclotomic import CyclotomicNumber
from .modular_data import ModularData


def _frac_tex(r: Fraction) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    sign = "-" if r < 0 else ""
    return f"{sign}\\frac{{{abs(r.numerator)}}}{{{r.denominator}}}"


def _squarefree_root(r: Fraction) -> tuple[Fraction, int]:
    """(c, m) with sqrt(r) = c sqrt(m), m squarefree, for r > 0."""
    rest = r.numerator * r.denominator  # r = rest / den^2
    c, k = 1, 2
    while k * k <= rest:
        while rest % (k * k) == 0:
            rest //= k * k
            c *= k
        k += 1
    return Fraction(c, r.denominator), rest


def _quadratic_surd(z: CyclotomicNumber) -> str | None:
    """a + c sqrt(m) for elements with exactly two Galois conjugates."""
    M = z.order
    if M > 240:
        return None
    images = []
    for k in range(1, M):
        if gcd(k, M) == 1:
            w = z.galois(k)
            if all(w != u for u in images):
                images.append(w)
                if len(images) > 2:
                    return None
    if len(images) != 2:
        return None
    a = ((images[0] + images[1]) / 2).is_rational()
    r2 = ((z - a) * (z - a)).is_rational()
    if a is None or r2 is None or r2 <= 0:
        return None
    c, m = _squarefree_root(r2)
    if (z - a).to_complex().real < 0:
        c = -c
    root = ("" if abs(c) == 1 else _frac_tex(abs(c))) + f"\\sqrt{{{m}}}"
    head = _frac_tex(a)
    return f"{head}{'+' if c > 0 else '-'}{root}"


def to_latex(z: CyclotomicNumber) -> str:
    """A compact exact LaTeX form: rational, root of unity, or rational multiple of a square root."""
    r = z.is_rational()
    if r is not None:
        return _frac_tex(r)
    t = z.root_phase()
    if t is not None:
        if t == Fraction(1, 4):
            return "i"
        if t == Fraction(3, 4):
            return "-i"
        return f"\\zeta_{{{t.denominator}}}^{{{t.numerator}}}" if t.numerator != 1 else f"\\zeta_{{{t.denominator}}}"
    r2 = (z * z).is_rational()
    if r2 is not None:
        sign = 1 if r2 > 0 else -1
        c, m = _squarefree_root(abs(r2))
        val = z.to_complex()
        if (val.real if sign > 0 else val.imag) < 0:
            c = -c
        unit = "" if sign > 0 else "i"
        coef = "" if c == 1 else "-" if c == -1 else _frac_tex(c)
        return f"{coef}{unit}\\sqrt{{{m}}}"
    surd = _quadratic_surd(z)
    if surd is not None:
        return surd
    # fall back to a polynomial in zeta_M
    terms = []
    for k, c in enumerate(z.coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (f"\\zeta_{{{z.order}}}" if k == 1 else f"\\zeta_{{{z.order}}}^{{{k}}}")
        if mono and c == 1:
            s = mono
        elif mono and c == -1:
            s = "-" + mono
        else:
            s = _frac_tex(c) + mono
        terms.append(s)
    out = " + ".join(terms).replace("+ -", "- ")
    return f"({out})"


def numeric(z: CyclotomicNumber, digits: int) -> str:
    c = z.to_complex()
    re, im = round(c.real, digits), round(c.imag, digits)
    re = 0.0 if re == 0 else re
    im = 0.0 if im == 0 else im
    if im == 0:
        return f"{re:.{digits}g}"
    return f"{re:.{digits}g}{'+' if im > 0 else '-'}{abs(im):.{digits}g}i"


def latex_matrix(rows: list[list[str]]) -> str:
    body = " \\\\\n".join(" & ".join(r) for r in rows)
    return "\\begin{pmatrix}\n" + body + "\n\\end{pmatrix}"


def emit_latex(md: ModularData) -> str:
    K = md.rank
    S = [[to_latex(md.S[i, j]) for j in range(K)] for i in range(K)]
    T = ", ".join(to_latex(t) for t in md.theta)
    labels = ", ".join(md.labels)
    return f"% order: {labels}\nS = {latex_matrix(S)}\n\nT = \\mathrm{{diag}}\\{{{T}\\}}\n"


def emit_csv(md: ModularData, digits: int = 12) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "dim", "theta"] + md.labels)
    for i, lab in enumerate(md.labels):
        w.writerow([lab, numeric(md.dims[i], digits), numeric(md.theta[i], digits)] + [numeric(md.S[i, j], digits) for j in range(md.rank)])
    return buf.getvalue()


def emit_pretty(md: ModularData, digits: int = 6) -> str:
    lines = []
    width = max(len(x) for x in md.labels) if md.labels else 1
    lines.append(f"rank {md.rank}, global dimension {numeric(md.global_dim, digits)}")
    for i, lab in enumerate(md.labels):
        lines.append(f"{lab:<{width}}  d={numeric(md.dims[i], digits)}  theta={numeric(md.theta[i], digits)}")
    lines.append("S:")
    for i in range(md.rank):
        lines.append("  " + " ".join(f"{numeric(md.S[i, j], 3):>12}" for j in range(md.rank)))
    return "\n".join(lines) + "\n"


def emit(md: ModularData, fmt: str, digits: int = 12) -> str:
    if fmt == "json":
        return md.to_json() + "\n"
    if fmt == "csv":
        return emit_csv(md, digits)
    if fmt == "latex":
        return emit_latex(md)
    if fmt == "pretty":
        return emit_pretty(md, min(digits, 6))
    raise ValueError(f"unknown format {fmt!r}")
