import json

import pytest

from cubicsys.cli import main
from cubicsys.forms import from_positional, parse_form
from cubicsys.gf import make_field


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_geom_irreducible(capsys):
    code, out, _ = run(capsys, "classify", "--form", "x^3+y*z^2", "--q", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["kind"] == "GeomIrreducible"
    K = make_field(2)
    assert parse_form(rep["form"]["text"], K) == from_positional(rep["form"]["positional"], K)


def test_explicit_q7(capsys):
    code, out, _ = run(capsys, "explicit", "--q", "7")
    assert code == 0
    rep = json.loads(out)
    assert len(rep["scan"]["reducible"]) == 1
    assert rep["scan"]["reducible"][0]["verdict"]["kind"] == "FqIrreducibleGeomReducible"
    K = make_field(7)
    for f in rep["scan"]["system"]["basis"]:
        assert parse_form(f["text"], K, degree=3) == from_positional(f["positional"], K)


def test_verify_table_subset_csv(capsys):
    code, out, _ = run(capsys, "verify-table", "--q", "2", "--q", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["q,ok,members,reducible", "2,True,15,0", "3,True,40,0"]


def test_orbit_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "orbit", "--q", "3", "--seed", "2", "--out", str(a))[0] == 0
    assert run(capsys, "orbit", "--q", "3", "--seed", "2", "--out", str(b))[0] == 0
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    for js in (ja, jb):
        js["scan"].pop("elapsed_s")
    assert ja == jb
    assert a.read_text().endswith("\n")


def test_lemma31_and_census(capsys):
    code, out, _ = run(capsys, "lemma31", "--q", "3", "--format", "text")
    assert code == 0 and "GeomIrreducible" in out
    code, out, _ = run(capsys, "census", "--q", "2")
    assert code == 0 and json.loads(out)["total"] == 1023


def test_search_found_and_budget(capsys, tmp_path):
    log = tmp_path / "log.ndjson"
    code, out, _ = run(capsys, "search", "--q", "2", "--seed", "3", "--witness-log", str(log))
    assert code == 0 and json.loads(out)["found"]
    assert len(log.read_text().splitlines()) == 1
    code, out, err = run(capsys, "search", "--q", "3", "--max-iters", "1")
    assert code == 3
    assert err.startswith("error: budget:") and err.count("\n") == 1


def test_extend_exit_codes(capsys):
    assert run(capsys, "extend", "--q", "2", "--k", "3", "--row", "8")[0] == 0
    code, _, err = run(capsys, "extend", "--q", "2", "--k", "2", "--row", "8")
    assert code == 2 and err.startswith("error: verification:")
    code, out, _ = run(capsys, "extend", "--q", "2", "--k", "1", "--format", "text",
                       "--system", "x^2y + y^2z + xz^2 + yz^2; x^2y + xy^2 + xz^2 + z^3;"
                       " x^3 + x^2y + y^2z + xz^2 + z^3; x^2y + y^3 + x^2z + xyz + xz^2 + yz^2 + z^3")
    assert code == 0 and "ok=True" in out


@pytest.mark.parametrize("argv", [
    ["classify", "--form", "x^3", "--q", "6"],
    ["bogus"],
    ["census", "--q", "7"],
    ["classify", "--form", "x^3+w", "--q", "2"],
    ["search", "--q", "2", "--max-iters", "0"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error: usage:") and err.count("\n") == 1
