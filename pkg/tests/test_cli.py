import json
import re
import subprocess
import sys

import pytest

from tymtc.center import center_modular_data
from tymtc.cli import main, parse_args
from tymtc.eseries import golden_tables
from tymtc.modular_data import ModularData


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def same_data(a: ModularData, b: ModularData) -> bool:
    return (
        a.labels == b.labels
        and all(x == y for x, y in zip(a.dims, b.dims))
        and all(x == y for x, y in zip(a.theta, b.theta))
        and a.S.equals(b.S)
    )


@pytest.mark.parametrize(
    "argv",
    [
        ["center", "--group", "3", "--chi", "gram:2", "--tau", "+"],
        ["center", "--group", "2,2", "--chi", "hyperbolic", "--tau", "-"],
        ["eseries", "--group", "3,3", "--q", "diag:2,1", "--sign", "+"],
        ["eseries", "--group", "5", "--q", "diag:2", "--sign", "-"],
    ],
)
def test_json_round_trip_and_determinism(tmp_path, argv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--emit", "json", "-o", str(a)]) == 0
    assert main(argv + ["--emit", "json", "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    md = ModularData.from_json(a.read_text(encoding="utf-8"))
    again = ModularData.from_json(md.to_json())
    assert same_data(md, again)
    if argv[0] == "center" and argv[2] == "3":
        from tymtc.abelian import make_group
        from tymtc.forms import bicharacter_from_exponents
        from tymtc.ty import TYCategory

        ref = center_modular_data(TYCategory(bicharacter_from_exponents(make_group([3]), [[2]])))
        assert same_data(md, ref)


def test_json_schema(capsys):
    rc, out, _ = run(capsys, "center", "--group", "3", "--chi", "gram:2", "--emit", "json")
    assert rc == 0
    obj = json.loads(out)
    assert set(obj) >= {"labels", "dims", "theta", "S"}
    assert len(obj["labels"]) == 15 and len(obj["S"]) == 15


def test_verify_good_and_corrupted(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    good = tmp_path / "good.json"
    assert main(["eseries", "--group", "3", "--q", "diag:1", "--emit", "json", "-o", str(good)]) == 0
    rc, out, _ = run(capsys, "verify", "--input", str(good))
    assert rc == 0 and "report written to good.report.json" in out
    assert json.loads((tmp_path / "good.report.json").read_text())["passed"]

    obj = json.loads(good.read_text())
    md = ModularData.from_json_obj(obj)
    i, j = next((i, j) for i in range(md.rank) for j in range(md.rank) if md.S[i, j] == 0)
    obj["S"][i][j] = obj["S"][0][0]
    bad = tmp_path / "corrupted.json"
    bad.write_text(json.dumps(obj))
    report = tmp_path / "r.json"
    rc, out, _ = run(capsys, "verify", "--input", str(bad), "--emit", str(report))
    assert rc == 1
    assert f"FAIL  symmetric at [{i}, {j}]" in out or f"FAIL  symmetric at [{j}, {i}]" in out
    assert str(report) in out
    rep = json.loads(report.read_text())
    assert not rep["passed"] and rep["checks"]["symmetric"]["counterexample"] in ([i, j], [j, i])


def test_usage_errors(tmp_path, capsys):
    rc, _, err = run(capsys, "eseries", "--group", "4", "--q", "diag:1")
    assert rc == 2 and "odd order" in err
    assert run(capsys, "verify", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify", "--input", "x.json", "--checks", "bogus")[0] == 2
    assert run(capsys, "--max-group-order", "5", "center", "--group", "8", "--chi", "gram:1")[0] == 2
    assert run(capsys, "reproduce", "--case", "9.9")[0] == 2
    assert run(capsys, "center", "--group", "3")[0] == 2
    assert run(capsys, "center", "--group", "2", "--chi", "gram:0")[0] == 2


def test_reproduce_all(capsys):
    rc, out, _ = run(capsys, "reproduce")
    assert rc == 0
    assert out.count(": match") == 12 and "MISMATCH" not in out
    rc, out, _ = run(capsys, "eseries", "reproduce", "--case", "5.3a", "--tau", "+")
    assert rc == 0 and "5.3a tau=+: match" in out


def test_reproduce_json(capsys):
    rc, out, _ = run(capsys, "reproduce", "--case", "5.4c", "--emit", "json")
    assert rc == 0
    reps = json.loads(out)
    assert len(reps) == 2 and all(r["match"] for r in reps)


def test_lagrangian(capsys):
    rc, out, _ = run(capsys, "lagrangian", "--group", "3,3", "--chi", "hyperbolic")
    assert rc == 0 and out.startswith("2 Lagrangian subgroup(s)")
    rc, out, _ = run(capsys, "lagrangian", "--group", "3,3", "--chi", "hyperbolic", "--emit", "json")
    gens = sorted(tuple(map(tuple, L["generators"])) for L in json.loads(out))
    assert gens == [((0, 1),), ((1, 0),)]
    rc, out, _ = run(capsys, "lagrangian", "--group", "5", "--chi", "gram:1")
    assert rc == 0 and out.startswith("0 Lagrangian")


def _latex_matrix(text, name):
    body = re.search(name + r" = \\begin\{pmatrix\}\n(.*?)\n\\end\{pmatrix\}", text, re.S).group(1)
    return [[c.strip() for c in row.split("&")] for row in body.split(r" \\" + "\n")]


@pytest.mark.parametrize("sign,flag", [(1, "+"), (-1, "-")])
def test_latex_layout_matches_stored_table(capsys, sign, flag):
    rc, out, _ = run(capsys, "eseries", "--group", "3,3", "--q", "diag:2,1", "--sign", flag, "--emit", "latex")
    assert rc == 0
    gold = golden_tables("5.3a", sign)
    order = out.splitlines()[0]
    assert order == "% order: " + ", ".join(gold["labels"])
    rows = _latex_matrix(out, "S")
    assert len(rows) == 8 and all(len(r) == 8 for r in rows)
    assert [[int(c) for c in r] for r in rows] == [[int(c.is_rational()) for c in r] for r in gold["S"]]
    assert r"T = \mathrm{diag}\{" in out


def test_csv_and_pretty(capsys):
    rc, out, _ = run(capsys, "center", "--group", "3", "--chi", "gram:2", "--emit", "csv", "--digits", "6")
    assert rc == 0
    lines = [l for l in out.splitlines() if l]
    assert len(lines) >= 15
    rc, out, _ = run(capsys, "ty", "summary", "--group", "3", "--chi", "gram:2")
    assert rc == 0 and out
    rc, out, _ = run(capsys, "ty", "relcenter", "--group", "3", "--chi", "gram:2", "--emit", "json")
    assert rc == 0 and json.loads(out)


def test_parse_args_conflicts():
    from tymtc.cli import UsageError

    with pytest.raises(UsageError):
        parse_args(["eseries", "--group", "3", "--q", "diag:1", "--sign", "+", "--tau", "-"])


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "tymtc", "lagrangian", "--group", "2,2", "--chi", "hyperbolic"], capture_output=True, text=True)
    assert r.returncode == 0 and "Lagrangian" in r.stdout
