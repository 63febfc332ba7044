import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neroncomb import cli
from neroncomb.curvefile import parse_curve, read_curve, serialize_curve
from neroncomb.errors import CurveSyntaxError, DisconnectedGraph, DuplicateVertexId
from neroncomb.graph import build_curve

V3 = """# two elliptic components meeting in three points
vertex C1 1
vertex C2 1
edge C1 C2
edge C1 C2   # second node
edge C1 C2
"""


@pytest.fixture
def write(tmp_path):
    def _write(text, name="x.curve"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# ------------------------------------------------------------- curve files


def test_parse_v3():
    cf = parse_curve(V3)
    assert cf.curve == build_curve([("C1", 1), ("C2", 1)], [(0, 1)] * 3)
    assert cf.twisters is None


def test_parse_errors_carry_line_numbers():
    with pytest.raises(CurveSyntaxError, match="line 3: unknown directive 'node'"):
        parse_curve("vertex A 1\nvertex B 1\nnode A B\n")
    with pytest.raises(CurveSyntaxError, match="line 2: unknown vertex id 'C'"):
        parse_curve("vertex A 1\nedge A C\n")
    with pytest.raises(CurveSyntaxError, match="line 1: genus 'x'"):
        parse_curve("vertex A x\n")
    with pytest.raises(CurveSyntaxError, match="line 2: twister has 1 entries"):
        parse_curve("vertex A 1\ntwister 3\nvertex B 1\nedge A B\n")
    with pytest.raises(DuplicateVertexId):
        parse_curve("vertex A 1\nvertex A 2\n")
    with pytest.raises(DisconnectedGraph):
        parse_curve("vertex A 1\nvertex B 1\n")


def test_parse_custom_twister():
    cf = parse_curve("vertex C1 1\nvertex C2 1\nedge C1 C2\nedge C1 C2\nedge C1 C2\ntwister -5,5\n")
    assert cf.twisters == ((-5, 5),)
    assert serialize_curve(cf).endswith("twister -5,5\n")


@st.composite
def curves(draw):
    n = draw(st.integers(1, 5))
    ids = draw(st.lists(st.text("abcXYZ_0123", min_size=1, max_size=4), min_size=n, max_size=n, unique=True))
    genera = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    edges += draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=5))
    return build_curve(list(zip(ids, genera)), edges)


@settings(max_examples=150, deadline=None)
@given(curves())
def test_round_trip(x):
    text = serialize_curve(x)
    assert parse_curve(text).curve == x
    assert serialize_curve(parse_curve(text)) == text


def test_read_curve_keeps_path(write):
    path = write(V3)
    assert read_curve(path).path == path


# -------------------------------------------------------------- commands


def test_dcg(write, capsys):
    code, out, _ = run(["dcg", write(V3)], capsys)
    assert code == 0
    assert "invariant_factors: (3)" in out and "order: 3" in out and "complexity_check: OK" in out


def test_dcg_json(write, capsys):
    code, out, _ = run(["dcg", write(V3), "--json"], capsys)
    report = json.loads(out)
    assert code == 0
    assert set(report) == {"command", "inputs", "results", "provenance"}
    assert report["results"]["invariant_factors"] == [3]
    assert report["results"]["order"] == 3


def test_dcg_custom_lattice(write, capsys):
    path = write("vertex C1 1\nvertex C2 1\nedge C1 C2\nedge C1 C2\nedge C1 C2\ntwister -5,5\n")
    code, out, _ = run(["dcg", path, "--json"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["invariant_factors"] == [5] and res["custom_lattice"]


def test_balanced(write, capsys):
    code, out, _ = run(["balanced", write(V3), "--degree", "0", "--json"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["count"] == 3
    assert res["multidegrees"] == [[-1, 1], [0, 0], [1, -1]]
    code, out, _ = run(["balanced", write(V3), "--degree", "0", "--level", "semibalanced"], capsys)
    assert code == 0 and "count: 3" in out


def test_models(capsys):
    code, out, _ = run(["models", "--genus", "5", "--json"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["count"] == 2 and res["degrees"] == [1, 3]


def test_classify_and_equiv(write, capsys):
    vine2 = write("vertex C1 1\nvertex C2 1\nedge C1 C2\nedge C1 C2\n")
    code, out, _ = run(["classify", vine2, "--multidegree", "1,-1", "--json"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["level"] == "balanced" and res["witness"] == ["C2"]
    assert res["bounds"] == {"lower": "-1", "value": -1, "upper": "1"}
    code, out, _ = run(["equiv", vine2, "--multidegree", "1,-1", "--multidegree", "-1,1", "--json"], capsys)
    assert code == 0 and json.loads(out)["results"]["equivalent"] is True
    code, out, _ = run(["equiv", write(V3), "--multidegree=1,-1", "--multidegree=0,0", "--json"], capsys)
    assert code == 0 and json.loads(out)["results"]["equivalent"] is False


def test_twister_command(write, capsys):
    code, out, _ = run(["twister", write(V3), "--coeffs", "1,0", "--json"], capsys)
    assert code == 0 and json.loads(out)["results"]["multidegree"] == [-3, 3]


def test_dgeneral(write, capsys):
    vine2 = write("vertex C1 1\nvertex C2 1\nedge C1 C2\nedge C1 C2\n")
    code, out, _ = run(["dgeneral", vine2, "--degree", "0", "--json"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["general"] is False
    assert sorted(res["equivalent_balanced_pair"]) == [[-1, 1], [1, -1]]
    code, out, _ = run(["dgeneral", write(V3), "--degree", "2", "--json"], capsys)
    assert json.loads(out)["results"]["general"] is True


def test_blowup_and_strata(write, capsys):
    code, out, _ = run(["blowup", write(V3), "--nodes", "0", "--degree", "2", "--json"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["exceptional"] == ["E0"] and res["rho_bijective"]
    assert res["rho"] == [{"blown_up": [0, 1, 1], "normalized": [0, 1]},
                          {"blown_up": [1, 0, 1], "normalized": [1, 0]}]
    code, out, _ = run(["strata", write(V3), "--degree", "2", "--json"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["stratum_count"] == 7 and res["total_components"] == 12
    assert res["minimal_strata"] == 3
    code, out, _ = run(["strata", write(V3), "--degree", "2", "--nodes", "0", "--json"], capsys)
    assert [s["nodes"] for s in json.loads(out)["results"]["strata"]] == [[], [0]]


def test_check(write, capsys):
    code, out, _ = run(["check", write(V3), "--degree", "2"], capsys)
    assert code == 0 and "all_passed: yes" in out


def test_check_reports_violations(write, capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_checks", lambda curve, d: [("always false", False)])
    code, _, err = run(["check", write(V3), "--degree", "2"], capsys)
    assert code == 1 and "always false" in err


# ------------------------------------------------------------- exit codes


def test_precondition_failures_exit_1(write, capsys):
    vine2 = write("vertex C1 1\nvertex C2 1\nedge C1 C2\nedge C1 C2\n")
    code, _, err = run(["strata", vine2, "--degree", "0"], capsys)
    assert code == 1 and "not 0-general" in err
    code, _, err = run(["blowup", write(V3), "--nodes", "0,1,2", "--degree", "2"], capsys)
    assert code == 1 and "disconnected" in err
    code, _, err = run(["models", "--genus", "2"], capsys)
    assert code == 1
    code, _, err = run(["dcg", write("vertex A 1\nvertex B 1\n")], capsys)
    assert code == 1 and "connected components" in err


def test_usage_errors_exit_2(write, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["balanced", write(V3)])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    code, _, err = run(["dcg", "/nonexistent/file.curve"], capsys)
    assert code == 2 and "cannot read" in err
    code, _, err = run(["dcg", write("vertex A 1\nbogus\n")], capsys)
    assert code == 2 and "line 2" in err
    code, _, _ = run(["equiv", write(V3), "--multidegree", "1,-1"], capsys)
    assert code == 2
    code, _, _ = run(["twister", write(V3)], capsys)
    assert code == 2


def test_genus_two_note(write, capsys):
    vine3 = write("vertex C1 0\nvertex C2 0\nedge C1 C2\nedge C1 C2\nedge C1 C2\n")
    code, out, _ = run(["balanced", vine3, "--degree", "0"], capsys)
    assert code == 0 and "genus 2" in out


def test_reports_are_deterministic(write):
    path = write(V3)
    cmd = [sys.executable, "-m", "neroncomb.cli", "strata", path, "--degree", "2", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
