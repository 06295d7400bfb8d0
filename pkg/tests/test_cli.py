import json

import pytest

from gridforge import cli
from gridforge.cli import (cache_dir, check_fixture, fixture_expectations, fixtures, hfk_from_dict, hfk_to_dict,
                           main, render_report)
from gridforge.gridcomplex import enumerate_states, hfk_hat

from helpers import FIXTURES, g0_result


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", list(fixtures()))
def test_fixture_gates(name):
    check_fixture(name)


def test_fixture_library():
    lib = fixtures()
    assert {"unknot2", "unknot3", "trefoil", "trefoil-mirror", "figure-eight", "T25", "T34", "T35"} <= set(lib)
    assert lib["T35"].n == 8 and lib["T34"].n == 7 and lib["figure-eight"].n == 6
    assert fixture_expectations()["T34"]["tau"] == 3


@pytest.mark.parametrize("name", [k for k, v in fixture_expectations().items() if "same_as" in v])
def test_scrambled_fixtures_match(name):
    other = fixture_expectations()[name]["same_as"]
    assert FIXTURES[name] != FIXTURES[other]
    assert g0_result(name).g0_knot == g0_result(other).g0_knot
    assert g0_result(name).tau == g0_result(other).tau


def test_compute_trefoil(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "compute", "--input", "fixture:trefoil", "--invariants", "g0,tau,upsilon",
                        "--output", str(out), "--no-cache")
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema"] == 1 and report["tau"] == 1
    assert report["g0_K"] == [[[0, 1]], [[1, 0]]]
    assert "vk" not in report
    assert "PL[(0, 0), (1, -1), (2, 0)]" in text
    assert "R(0, 1), R(1, 0)" in text


def test_table_regenerates_from_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    _, text, _ = run(capsys, "compute", "--input", "fixture:T34", "--surgery", "1,-1,3/2", "--output", str(out),
                     "--no-cache")
    report = json.loads(out.read_text())
    assert render_report(report) == text
    assert render_report(json.loads(json.dumps(report))) == text
    assert report["d"]["1/1"] == ["-2"]


def test_unknot_surgery(capsys):
    code, text, _ = run(capsys, "compute", "--input", "fixture:unknot2", "--surgery", "1/1", "--no-cache")
    assert code == 0 and json.loads(text)["d"] == {"1/1": ["0"]}


def test_figure_eight_is_trivial(capsys):
    _, text, _ = run(capsys, "compute", "--input", "fixture:figure-eight", "--invariants", "g0", "--no-cache")
    assert json.loads(text)["nu_plus_trivial"] is True


def test_file_inputs(tmp_path, capsys):
    g = FIXTURES["trefoil"]
    (tmp_path / "t.json").write_text(g.to_json())
    (tmp_path / "t.txt").write_text(g.to_text())
    reports = []
    for f in ("t.json", "t.txt"):
        _, text, _ = run(capsys, "compute", "--input", str(tmp_path / f), "--no-cache", "--no-pi")
        reports.append(json.loads(text))
    assert reports[0] == reports[1]


def test_cache_is_transparent(tmp_path, capsys):
    args = ["compute", "--input", "fixture:T25", "--cache", str(tmp_path / "c")]
    _, first, _ = run(capsys, *args)
    files = list((tmp_path / "c").glob("*.json"))
    assert len(files) == 1
    _, second, _ = run(capsys, *args)
    assert first == second
    _, fresh, _ = run(capsys, "compute", "--input", "fixture:T25", "--no-cache")
    assert fresh == first


def test_cache_location(monkeypatch, tmp_path):
    monkeypatch.delenv("GRIDFORGE_CACHE", raising=False)
    assert str(cache_dir(None)) == ".gridforge-cache"
    monkeypatch.setenv("GRIDFORGE_CACHE", str(tmp_path / "env"))
    assert cache_dir(None) == tmp_path / "env"
    assert cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"


def test_hfk_command(capsys):
    code, text, _ = run(capsys, "hfk", "--input", "fixture:trefoil")
    assert code == 0 and text.splitlines()[0] == "g3 = 1"
    assert len(text.splitlines()) == 2 + 3
    _, text, _ = run(capsys, "hfk", "--input", "fixture:unknot3", "--json")
    assert json.loads(text)["entries"] == [{"a": 0, "m": 0, "rank": 1}]


def test_hfk_order_and_round_trip():
    hfk = hfk_hat(enumerate_states(FIXTURES["T34"]))
    data = hfk_to_dict(hfk)
    keys = [(e["a"], e["m"]) for e in data["entries"]]
    assert keys == sorted(keys, reverse=True)
    assert hfk_from_dict(data) == {k: v for k, v in hfk.items() if v}


def test_hfk_file_hint(tmp_path, capsys):
    f = tmp_path / "h.json"
    _, text, _ = run(capsys, "hfk", "--input", "fixture:T25", "--json")
    f.write_text(text)
    code, out, _ = run(capsys, "compute", "--input", "fixture:T25", "--hfk", str(f), "--g3", "2", "--no-cache")
    assert code == 0 and json.loads(out)["tau"] == 2


def test_check_region(capsys):
    code, text, _ = run(capsys, "check-region", "--input", "fixture:trefoil", "--region", "[[0, 0]]")
    v = json.loads(text)
    assert code == 0 and v["realizable"] is False and v["region"] == [[0, 0]]
    assert set(v) == {"region", "shift", "rows", "cols", "realizable", "via"}
    _, text, _ = run(capsys, "check-region", "--input", "fixture:trefoil", "--region", "[[1, 0]]")
    assert json.loads(text)["realizable"] is True


def test_check_region_file(tmp_path, capsys):
    f = tmp_path / "r.json"
    f.write_text("[[-1, \"inf\"], [0, 1]]")
    _, text, _ = run(capsys, "check-region", "--input", "fixture:trefoil", "--region", str(f))
    assert json.loads(text)["realizable"] is True


@pytest.mark.parametrize("argv", [
    ["compute", "--input", "missing.json"],
    ["compute", "--input", "fixture:nope"],
    ["compute", "--input", "fixture:trefoil", "--invariants", "foo"],
    ["compute", "--input", "fixture:trefoil", "--surgery", "0"],
    ["compute", "--input", "fixture:trefoil", "--g3", "1", "--g4", "2"],
    ["compute", "--input", "fixture:trefoil", "--g3", "2", "--no-cache"],
    ["check-region", "--input", "fixture:trefoil", "--region", "[[0]]"],
    ["compute"],
    ["bogus"],
])
def test_input_errors_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:   # argparse usage errors
        code = exc.code
    assert code == 1


def test_bad_grid_file_exits_1(tmp_path, capsys):
    f = tmp_path / "g.json"
    f.write_text('{"n":2,"O":[0,1],"X":[0,1]}')
    code, _, err = run(capsys, "compute", "--input", str(f), "--no-cache")
    assert code == 1 and "same square" in err


def test_capacity_exits_2(capsys):
    code, _, err = run(capsys, "compute", "--input", "fixture:T35", "--capacity", "1000", "--no-cache")
    assert code == 2 and "capacity" in err


def test_internal_error_exits_3(monkeypatch, capsys):
    def boom(*a, **k):
        raise cli.InternalError("forced")
    monkeypatch.setattr(cli, "compute_g0", boom)
    code, _, err = run(capsys, "compute", "--input", "fixture:trefoil", "--no-cache")
    assert code == 3 and "forced" in err


def test_fixtures_command(capsys):
    code, text, _ = run(capsys, "fixtures")
    assert code == 0 and "T35" in text
