"""Command line entry point.

    tymtc ty --group 3,3 --chi hyperbolic --tau + [relcenter] [--emit json]
    tymtc center --group 3 --chi gram:2 --tau + --emit json|latex|csv|pretty
    tymtc eseries --group 3 --q diag:1 --sign + --emit latex
    tymtc eseries reproduce --case 5.3a --tau +
    tymtc reproduce --case all
    tymtc verify --input data.json --checks axioms,verlinde,zeros,prop62 --emit report.json
    tymtc lagrangian --group 3,3 --chi hyperbolic

Exit codes: 0 success, 1 verification failure, 2 usage or resource error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import TymtcError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "latex", "pretty")
CHECKS = ("axioms", "verlinde", "zeros", "thm61", "prop62", "galois")


class UsageError(Exception):
    pass


def _sign(text: str) -> int:
    t = text.strip()
    if t in ("+", "+1", "1", "plus"):
        return 1
    if t in ("-", "-1", "minus"):
        return -1
    raise argparse.ArgumentTypeError(f"expected + or -, got {text!r}")


def _digits(text: str) -> int:
    d = int(text)
    if not 1 <= d <= 100:
        raise argparse.ArgumentTypeError("--digits must be between 1 and 100")
    return d


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tymtc", description="Modular data of Tambara-Yamagami centers and E(q, +-).")
    p.add_argument("--max-group-order", type=int, help="override the group-order bound (MTC_MAX_GROUP_ORDER)")
    sub = p.add_subparsers(dest="command", required=True)

    def out_opts(sp, default="pretty"):
        sp.add_argument("--emit", choices=FORMATS, default=default)
        sp.add_argument("--digits", type=_digits, default=12)
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")

    ty = sub.add_parser("ty", help="a Tambara-Yamagami category and its relative center")
    ty.add_argument("what", nargs="?", choices=("summary", "relcenter"), default="summary")
    ty.add_argument("--group", required=True)
    ty.add_argument("--chi", required=True)
    ty.add_argument("--tau", type=_sign, default=1)
    ty.add_argument("--emit", choices=("json", "pretty"), default="pretty")
    ty.add_argument("--output", "-o")

    ce = sub.add_parser("center", help="modular data of the Drinfeld center")
    ce.add_argument("--group", required=True)
    ce.add_argument("--chi", required=True)
    ce.add_argument("--tau", type=_sign, default=1)
    ce.add_argument("--convention", choices=("balanced", "printed"), default="balanced")
    out_opts(ce)

    es = sub.add_parser("eseries", help="modular data of E(q, +-)")
    es.add_argument("what", nargs="?", choices=("data", "reproduce"), default="data")
    es.add_argument("--group")
    es.add_argument("--q")
    es.add_argument("--sign", type=_sign)
    es.add_argument("--case")
    es.add_argument("--tau", type=_sign)
    out_opts(es)

    rp = sub.add_parser("reproduce", help="compare against the stored example tables")
    rp.add_argument("--case", default="all")
    rp.add_argument("--tau", type=_sign, help="one sign; both when omitted")
    rp.add_argument("--emit", choices=("json", "pretty"), default="pretty")
    rp.add_argument("--output", "-o")

    ve = sub.add_parser("verify", help="run the verification suite on a modular data JSON file")
    ve.add_argument("--input", required=True)
    ve.add_argument("--checks", default="axioms,verlinde,zeros,prop62")
    ve.add_argument("--emit", help="JSON report path (default: <input stem>.report.json in the working directory)")

    la = sub.add_parser("lagrangian", help="Lagrangian subgroups of (A, chi)")
    la.add_argument("--group", required=True)
    la.add_argument("--chi", required=True)
    la.add_argument("--emit", choices=("json", "pretty"), default="pretty")
    return p


def parse_args(argv=None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if args.command == "eseries":
        if args.what == "reproduce":
            if not args.case:
                raise UsageError("eseries reproduce needs --case")
            if args.sign is not None and args.tau is not None and args.sign != args.tau:
                raise UsageError("--sign and --tau disagree")
        else:
            if not args.group or not args.q:
                raise UsageError("eseries needs --group and --q")
            if args.tau is not None and args.sign is not None and args.tau != args.sign:
                raise UsageError("--sign and --tau disagree")
            from .abelian import parse_group

            g = parse_group(args.group)
            if g.order % 2 == 0:
                raise UsageError(f"--group: E(q, +-) requires odd order, got |A| = {g.order}")
    if args.command == "verify":
        bad = [c for c in args.checks.split(",") if c and c not in CHECKS]
        if bad:
            raise UsageError(f"--checks: unknown check(s) {', '.join(bad)}; choose from {', '.join(CHECKS)}")
    if args.command == "reproduce" and args.case != "all":
        from .eseries import CASES

        if args.case not in CASES:
            raise UsageError(f"--case: expected all or one of {', '.join(CASES)}")
    return args


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _category(args):
    from .abelian import parse_group
    from .forms import parse_form_spec
    from .ty import TYCategory

    g = parse_group(args.group)
    chi, _ = parse_form_spec(g, args.chi)
    return TYCategory(chi, args.tau)


# -- commands ------------------------------------------------------------------------------


def cmd_ty(args) -> int:
    c = _category(args)
    g = c.group
    if args.what == "summary":
        obj = {
            "group": list(g.invariant_factors),
            "tau": c.tau.to_json(),
            "simples": [str(s) for s in c.simples()],
            "fpdims": [c.fpdim(s).to_json() for s in c.simples()],
        }
        if args.emit == "json":
            _write(json.dumps(obj, indent=1) + "\n", args.output)
        else:
            _write(f"TY({g}, tau={'+' if c.tau_sign > 0 else '-'}1/sqrt({c.n}))\nsimples: {', '.join(obj['simples'])}\n", args.output)
        return EXIT_OK
    rel = c.relative_center()
    labels = rel.labels
    K = rel.size
    obj = {
        "group": list(g.invariant_factors),
        "simples": [str(x) for x in labels],
        "fusion": [[rel.fuse_indices(i, j) for j in range(K)] for i in range(K)],
        "t_delta": [rel.t_delta_index(i) for i in range(K)],
        "gamma": [rel.gamma_scalar(u).to_json() for u in labels],
        "braiding": _braiding_table(rel),
    }
    if args.emit == "json":
        _write(json.dumps(obj, indent=1) + "\n", args.output)
    else:
        lines = [f"relative center of TY({g}): {K} simples"]
        for i, u in enumerate(labels):
            lines.append(f"{i:>4} {u}  T_delta -> {obj['t_delta'][i]}")
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _braiding_table(rel) -> list:
    out = []
    for u in rel.labels:
        row = []
        for v in rel.labels:
            b = rel.crossed_braiding(u, v)
            if isinstance(b, dict):
                row.append([str(z.root_phase()) for z in b.values()])
            else:
                row.append(str(b.root_phase()))
        out.append(row)
    return out


def cmd_center(args) -> int:
    from .center import center_modular_data
    from .emit import emit

    md = center_modular_data(_category(args), args.convention)
    _write(emit(md, args.emit, args.digits), args.output)
    return EXIT_OK


def _print_reports(reports, fmt, path) -> int:
    ok = all(r.match for r in reports)
    if fmt == "json":
        _write(json.dumps([r.to_json() for r in reports], indent=1) + "\n", path)
    else:
        lines = []
        for r in reports:
            tau = "+" if r.sign > 0 else "-"
            status = "match" if r.match else "MISMATCH"
            lines.append(f"{r.case} tau={tau}: {status}")
            for cv in r.caveats:
                lines.append(f"    caveat: {cv}")
            if r.first_mismatch:
                lines.append(f"    first mismatch: {json.dumps(r.first_mismatch)}")
            cc = "matches" if r.central_charge_matches else "differs from"
            lines.append(f"    central charge {_short(r.central_charge)} {cc} the stored value {_short(r.central_charge_golden)}")
        _write("\n".join(lines) + "\n", path)
    return EXIT_OK if ok else EXIT_FAIL


def _short(z) -> str:
    from .emit import to_latex

    return to_latex(z)


def cmd_reproduce(args, case=None, tau=None) -> int:
    from .eseries import CASES, reproduce_example

    case = case or args.case
    tau = tau if tau is not None else args.tau
    cases = CASES if case == "all" else (case,)
    signs = (1, -1) if tau is None else (tau,)
    reports = [reproduce_example(c, s) for c in cases for s in signs]
    return _print_reports(reports, args.emit if args.emit in ("json", "pretty") else "pretty", getattr(args, "output", None))


def cmd_eseries(args) -> int:
    from .emit import emit
    from .eseries import ECategory, e_modular_data

    if args.what == "reproduce":
        tau = args.tau if args.tau is not None else args.sign
        return cmd_reproduce(args, case=args.case, tau=tau)
    sign = args.sign if args.sign is not None else (args.tau if args.tau is not None else 1)
    e = ECategory.from_spec(args.group, args.q, sign)
    _write(emit(e_modular_data(e), args.emit, args.digits), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .modular_data import ModularData
    from .verify import check_axioms

    try:
        with open(args.input, encoding="utf-8") as fh:
            md = ModularData.from_json(fh.read())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--input: {exc}") from None
    checks = [c for c in args.checks.split(",") if c]
    rep = check_axioms(md, checks)
    for name, res in rep.checks.items():
        status = "skip" if res.skipped else ("pass" if res.passed else "FAIL")
        extra = f" at {res.counterexample}" if res.counterexample is not None and not res.passed else ""
        print(f"{status:>4}  {name}{extra}" + (f"  ({res.detail})" if res.detail and not res.passed else ""))
    path = args.emit or Path(args.input).stem + ".report.json"
    _write(rep.to_json() + "\n", path)
    print(f"report written to {path}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_lagrangian(args) -> int:
    from .abelian import parse_group
    from .forms import lagrangian_subgroups, parse_form_spec

    g = parse_group(args.group)
    chi, _ = parse_form_spec(g, args.chi)
    Ls = lagrangian_subgroups(chi)
    if args.emit == "json":
        obj = [{"generators": [list(x) for x in L.generators], "elements": [list(x) for x in L.elements]} for L in Ls]
        print(json.dumps(obj, indent=1))
    else:
        print(f"{len(Ls)} Lagrangian subgroup(s)")
        for L in Ls:
            print(f"  {L}")
    return EXIT_OK


COMMANDS = {
    "ty": cmd_ty,
    "center": cmd_center,
    "eseries": cmd_eseries,
    "reproduce": cmd_reproduce,
    "verify": cmd_verify,
    "lagrangian": cmd_lagrangian,
}


def run(args) -> int:
    if args.max_group_order is None:
        return COMMANDS[args.command](args)
    old = os.environ.get("MTC_MAX_GROUP_ORDER")
    os.environ["MTC_MAX_GROUP_ORDER"] = str(args.max_group_order)
    try:
        return COMMANDS[args.command](args)
    finally:
        if old is None:
            del os.environ["MTC_MAX_GROUP_ORDER"]
        else:
            os.environ["MTC_MAX_GROUP_ORDER"] = old


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"tymtc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    except (ValueError, TymtcError) as exc:
        print(f"tymtc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(args)
    except UsageError as exc:
        print(f"tymtc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TymtcError) as exc:
        print(f"tymtc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
