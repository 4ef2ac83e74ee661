import json
import subprocess
import sys

import pytest

from clusterbasis.cli import main

DIAGONAL = {"kind": "open", "crossings": ["t1"], "start_triangle": 0}


@pytest.fixture
def curve(tmp_path):
    def write(data, name="curve.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_square_diagonal(capsys, curve):
    code, out, _ = run(capsys, "expand", "--surface", "square.json", "--curve", curve(DIAGONAL))
    assert code == 0
    data = json.loads(out)
    assert data["laurent"] == "(1 + y1)*x1^-1"
    assert data["g_vector"] == [-1]
    code, out, _ = run(capsys, "expand", "--surface", "square", "--curve", curve(DIAGONAL), "--format", "text")
    assert out == "(1 + y1)*x1^-1\n"


def test_expand_dot_and_loops(capsys, curve):
    code, out, _ = run(capsys, "expand", "--surface", "square", "--curve", curve(DIAGONAL), "--format", "dot")
    assert code == 0 and out.startswith("graph snake {")
    loop = {"kind": "closed", "crossings": ["t1", "t2"]}
    code, out, _ = run(capsys, "expand", "--surface", "annulus11", "--curve", curve(loop), "--format", "text")
    assert out == "(y2 + x1^2 + x2^2*y1*y2)*x1^-1*x2^-1\n"


def test_missing_file_is_a_usage_error(capsys, curve):
    code, out, err = run(capsys, "expand", "--surface", "nope.json", "--curve", curve(DIAGONAL))
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "usage"


def test_invalid_curve_is_a_validation_error(capsys, curve):
    code, _, err = run(capsys, "expand", "--surface", "square", "--curve", curve({"kind": "open", "crossings": ["zz"]}))
    assert code == 2
    assert json.loads(err)["error"] == "CurveError"
    code, _, err = run(capsys, "expand", "--surface", "square", "--curve", curve({"kind": "open"}, "x.json"), "--kinks", "-1")
    assert code == 2


def test_bad_json_is_reported(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "expand", "--surface", str(bad), "--curve", str(bad))
    assert code == 2 and "invalid JSON" in json.loads(err)["message"]


def test_mutate_echo_and_check(capsys, curve):
    code, out, _ = run(capsys, "mutate", "--surface", "square")
    assert code == 0
    assert json.loads(out)["trace"][0]["cluster"] == ["x1"]
    code, out, _ = run(capsys, "mutate", "--surface", "square", "--path", "1", "--check-against-curve", curve(DIAGONAL))
    assert code == 0 and json.loads(out)["check"]["status"] == "pass"
    wrong = {"kind": "open", "crossings": [], "edge": "t1"}
    code, out, _ = run(capsys, "mutate", "--surface", "square", "--path", "1", "--check-against-curve", curve(wrong))
    assert code == 1
    assert json.loads(out)["check"]["difference"]


def test_mutate_bad_path(capsys):
    code, _, err = run(capsys, "mutate", "--surface", "pentagon", "--path", "1,3")
    assert code == 2 and "1..2" in json.loads(err)["message"]
    code, _, _ = run(capsys, "mutate", "--surface", "pentagon", "--path", "a")
    assert code == 2


def test_mutate_random_paths(capsys):
    code, out, _ = run(capsys, "mutate", "--surface", "hexagon", "--random", "20", "--seed", "3")
    assert code == 0
    assert json.loads(out) == {"paths": 20, "seed": 3, "status": "pass", "variables_checked": json.loads(out)["variables_checked"]}


def test_lattice_command(capsys, curve):
    arc = {"kind": "open", "crossings": ["t1", "t2"], "endpoints": ["p1", "p4"]}
    code, out, _ = run(capsys, "lattice", "--surface", "pentagon", "--curve", curve(arc))
    data = json.loads(out)
    assert code == 0 and data["matchings"] == data["order_ideals"] == 3
    code, out, _ = run(capsys, "lattice", "--surface", "annulus11", "--curve", curve({"kind": "closed", "crossings": ["t1", "t2"]}), "--dot")
    assert code == 0 and out.startswith("digraph lattice")


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "chebyshev", "--surface", "annulus11.json", "--k", "2"],
        ["verify", "lattice-parity", "--max-tiles", "6"],
        ["verify", "lattice-parity", "--max-tiles", "4", "--surface", "annulus22", "--bound", "4"],
        ["verify", "ptolemy", "--surface", "pentagon"],
        ["verify", "counts", "--surface", "annulus22"],
        ["verify", "g-injectivity", "--surface", "annulus11", "--bound", "2", "--jobs", "2"],
    ],
)
def test_verify_suites_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    data = json.loads(out)
    assert code == 0 and data["status"] == "pass" and data["passed"] == data["total"] > 0


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "unknown")[0] == 2
    assert run(capsys, "verify", "chebyshev", "--surface", "pentagon")[0] == 2
    assert run(capsys, "verify", "ptolemy")[0] == 2
    assert run(capsys, "verify", "ptolemy", "--surface", "pentagon", "--jobs", "0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_catalog_and_bases(capsys):
    code, out, _ = run(capsys, "catalog", "--surface", "pentagon", "--format", "text")
    assert code == 0 and out.splitlines()[-1] == "arc crosses=t1 t2"
    code, out, _ = run(capsys, "bases", "--surface", "pentagon", "--bound", "1")
    data = json.loads(out)
    assert len(data["elements"]) == 6
    assert data["elements"][0] == {"collection": [], "g_vector": [0, 0], "laurent": "1"}


def test_manifest_is_reproducible(capsys, tmp_path):
    digests = []
    for i in range(2):
        path = tmp_path / f"m{i}.json"
        code, _, _ = run(capsys, "verify", "ptolemy", "--surface", "square", "--manifest", str(path))
        assert code == 0
        m = json.loads(path.read_text())
        assert m["summary"] == {"exit_code": 0, "passed": 1, "status": "pass", "total": 1}
        assert m["inputs"].keys() == {"square.json"}
        m["command"] = m["command"][:-1]
        digests.append((m["inputs"], m["version"], m["seed"]))
    assert digests[0] == digests[1]


def test_stdout_is_byte_identical_across_runs():
    argv = [sys.executable, "-m", "clusterbasis.cli", "verify", "g-injectivity", "--surface", "annulus11", "--bound", "2", "--jobs", "3"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]
