import io
import json

import pytest

from twoassoc.cli import run

DIAMOND = "0,0,0,0;1,0,0,0;1,0,0,0;0,1,1,0"


def _run(*argv):
    out = io.StringIO()
    status = run(list(argv), out)
    return status, out.getvalue()


def test_k_fvector():
    assert _run("k", "enum", "--r", "4", "--fvector") == (0, "5 5 1\n")


def test_k_lists_strata():
    status, text = _run("k", "enum", "--r", "3")
    assert status == 0
    lines = text.splitlines()
    assert lines[0] == "1 (x,x,x)"
    assert sorted(lines[1:3]) == ["0 ((x,x),x)", "0 (x,(x,x))"]
    assert lines[-1] == "3 strata"


def test_w_enum():
    status, text = _run("w", "enum", "--n", "1,1")
    lines = text.splitlines()
    assert status == 0
    assert len(lines) == 4
    assert lines[-1] == "3 strata"
    assert lines[0] == "1 (x,x) ; B<p|p>"
    assert _run("w", "enum", "--n", "1,1", "--fvector") == (0, "2 1\n")


def test_fiber_enum():
    status, text = _run("fiber", "enum", "--n", "1,0;0,1")
    assert status == 0
    assert text.splitlines()[-1] == "1 strata"


def test_desc():
    status, text = _run("desc", "--n", "1,0", "--cap", "2", "--epsilon", "1")
    assert status == 0
    assert text.splitlines()[-1] == "7 descriptors"


@pytest.mark.parametrize("argv", [
    ["w", "enum", "--n", "a,b"],
    ["w", "enum", "--n", "1,0;0,1"],
    ["desc", "--n", "1,0", "--cap", "x"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    assert _run(*argv)[0] == 2


def test_missing_file(tmp_path):
    assert _run("validate", "--in", str(tmp_path / "missing.json"))[0] == 2


def test_generate_validate_and_check(tmp_path):
    path = str(tmp_path / "diamond.json")
    status, text = _run("gen", "square_zero", "--matrix", DIAMOND, "--strata", "--out", path)
    assert status == 0
    provenance = json.loads(text)
    assert provenance["family"] == "square_zero"
    assert provenance["params"]["basis"] == ["b0", "b1", "b2", "b3"]

    status, text = _run("validate", "--in", path)
    assert (status, text.splitlines()[-1]) == (0, "0 violations")
    for which in ("ainf", "a2"):
        status, text = _run("check", which, "--in", path)
        assert (status, text.splitlines()[-1]) == (0, "0 residuals")
    assert _run("check", "compat", "--in", path) == (0, "0 problems\n")
    status, text = _run("mu", "--in", path)
    assert status == 0
    assert text.splitlines()[-1].endswith(" entries")


def test_generate_matrix_instance(tmp_path):
    path = str(tmp_path / "matrices.json")
    status, text = _run("gen", "strict_2cat", "--instance", "matrices", "--out", path)
    assert status == 0
    assert json.loads(text)["params"] == {"instance": "matrices"}
    status, text = _run("validate", "--in", path)
    assert (status, text.splitlines()[-1]) == (0, "0 violations")


def test_mutated_file_fails(tmp_path):
    path = str(tmp_path / "mutant.json")
    status, text = _run("gen", "square_zero", "--matrix", DIAMOND, "--mutate", "0", "--out", path)
    assert status == 0
    assert json.loads(text)["mutate"] == 0
    assert _run("validate", "--in", path)[0] == 1
    status, text = _run("check", "a2", "--in", path)
    assert status == 1
    assert text.splitlines()[-1] != "0 residuals"


def test_mutating_without_edges_fails(tmp_path):
    path = tmp_path / "flat.json"
    assert _run("gen", "square_zero", "--matrix", "0,0;1,0", "--mutate", "0", "--out", str(path))[0] == 2
    assert not path.exists()


def test_export_dot(tmp_path):
    status, text = _run("export", "dot", "--n", "1,1")
    assert status == 0
    assert "rankdir=BT" in text
    assert text.count(" -> ") == 2
    path = tmp_path / "w11.gv"
    status, text = _run("export", "dot", "--n", "1,1", "--out", str(path))
    assert status == 0
    assert text == f"3 strata written to {path}\n"
    assert path.read_text().startswith("digraph")
