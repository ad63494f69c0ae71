import json

import pytest

from graft_lab.cli import main


@pytest.fixture
def p3_file(tmp_path):
    path = tmp_path / "p3.json"
    path.write_text(json.dumps({"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]], "terminals": ["a", "c"]}))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_solve_join(capsys, p3_file):
    code, out = run(capsys, "solve-join", "--input", p3_file, "--enumerate", "--oracle")
    data = json.loads(out)
    assert code == 0
    assert data["nu"] == data["oracle_nu"] == 2
    assert data["joins"] == [[["a", "b"], ["b", "c"]]]


def test_distances(capsys, p3_file):
    _, out = run(capsys, "distances", "--input", p3_file, "--root", "a")
    data = json.loads(out)
    assert data["interval"] == [-2, -1, 0]
    assert data["levels"] == {"-2": ["c"], "-1": ["b"], "0": ["a"]}
    assert data["table"] == {"a": 0, "b": -1, "c": -2}


def test_components_all_roots(capsys, p3_file):
    _, out = run(capsys, "components", "--input", p3_file, "--all-roots")
    roots = json.loads(out)["roots"]
    assert sum(not K["capital"] for K in roots["b"]) == 2
    k = next(K for K in roots["a"] if K["level"] == -1)
    assert (k["vertices"], k["f_root"], k["f_antiroot"]) == (["b", "c"], "b", "a")


def test_kl_and_negset(capsys, p3_file):
    _, out = run(capsys, "kl", "--input", p3_file, "--root", "a")
    data = json.loads(out)
    assert data["classes"] == {"a": ["a"], "b": ["b"], "c": ["c"]}
    assert data["decapital"][1]["antiroot_class"] == ["a"]
    _, out = run(capsys, "negset", "--input", p3_file, "--base", "b", "--avoid", "a")
    assert json.loads(out) == {"set": ["c"], "witnesses": {"c": ["c", "b"]}}


def test_explicit_join_must_be_minimum(capsys, p3_file):
    code = main(["negset", "--input", p3_file, "--base", "a", "--join", "a:b"])
    assert code == 2
    assert "not a minimum join" in capsys.readouterr().err


def test_gen_and_export_dot(capsys, p3_file, tmp_path):
    _, out = run(capsys, "gen", "--max-vertices", "2")
    assert len(out.splitlines()) == 3
    dot = tmp_path / "p3.dot"
    assert main(["export-dot", "--input", p3_file, "--root", "a", "--output", str(dot)]) == 0
    assert dot.read_text().startswith("graph graft {")


def test_verify_writes_report(capsys, tmp_path):
    report = tmp_path / "out.json"
    code, out = run(capsys, "verify", "--exhaustive-n", "4", "--seed", "42", "--checks", "all",
                    "--threads", "1", "--report", str(report))
    assert code == 0
    data = json.loads(report.read_text())
    assert data["grafts"] == 167 and data["total_violations"] == 0
    assert json.loads(out)["grafts"] == 167


def test_bad_input_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": ["a", "b"], "edges": [["a", "b"]], "terminals": ["a"]}))
    assert main(["solve-join", "--input", str(bad)]) == 2
    assert "ParityError" in capsys.readouterr().err
