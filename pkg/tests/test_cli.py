"""End-to-end CLI: schemas, exit codes, determinism, strict mode."""

import json
import subprocess
import sys

import pytest

from cartierforge.cli import main


FIXTURE_A = {
    "schema": 1,
    "field": {"p": 2, "r": 1},
    "ring": {"tier": "artinian", "vars": ["x"], "relations": [[2]]},
    "modules": {
        "A": {"kind": "cartier",
              "carrier": {"actions": [[[0, 0], [1, 0]]]},
              "structure": [[0, 0], [1, 0]]},
        "sky": {"tier": "pid", "kind": "cartier",
                "torsion": {"x_action": [[0]], "structure": [[1]]}},
        "bad_free": {"tier": "pid", "kind": "cartier",
                     "free": [[[0], [1]], [[0], [0]]]},
    },
    "commands": [
        {"op": "validate", "module": "A"},
        {"op": "nilpotent", "module": "A"},
        {"op": "double-dual", "module": "A"},
        {"op": "unitalize", "module": "A"},
        {"op": "kashiwara", "module": "A", "j_gens": [[1]]},
        {"op": "local-duality", "module": "sky"},
        {"op": "perverse", "module": "sky"},
        {"op": "dualize", "module": "sky"},
    ],
}


def write(tmp_path, doc, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_run_fixture_file(tmp_path, capsys):
    path = write(tmp_path, FIXTURE_A)
    out = str(tmp_path / "report.json")
    code = main(["run", path, "--json", out])
    assert code == 0
    report = json.loads(open(out).read())
    assert report["ok"] and report["schema"] == 1
    by_op = {r["op"]: r for r in report["results"]}
    assert by_op["nilpotent"]["index"] == 2
    assert by_op["unitalize"]["status"] == "zero"
    assert by_op["double-dual"]["ok"]
    assert by_op["kashiwara"]["ok"]
    assert report["field"]["polynomial"] == [0, 1]
    assert report["timing_ms"] == 0


def test_reports_byte_stable(tmp_path):
    path = write(tmp_path, FIXTURE_A)
    o1, o2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    assert main(["run", path, "--json", o1]) == 0
    assert main(["run", path, "--json", o2]) == 0
    assert open(o1, "rb").read() == open(o2, "rb").read()


def test_schema_error_exit_2(tmp_path, capsys):
    path = write(tmp_path, {"schema": 99})
    assert main(["run", path]) == 2
    bad = dict(FIXTURE_A)
    bad = json.loads(json.dumps(FIXTURE_A))
    bad["commands"] = [{"op": "frobnicate"}]
    path2 = write(tmp_path, bad, "bad.json")
    assert main(["run", path2]) == 2
    capsys.readouterr()


def test_unsupported_nonfatal_unless_strict(tmp_path, capsys):
    doc = json.loads(json.dumps(FIXTURE_A))
    doc["commands"] = [{"op": "local-duality", "module": "bad_free"}]
    path = write(tmp_path, doc)
    assert main(["run", path]) == 0
    assert main(["run", path, "--strict"]) == 1
    capsys.readouterr()


def test_failed_assertion_exit_1(tmp_path, capsys):
    doc = json.loads(json.dumps(FIXTURE_A))
    # an invalid structure: identity kappa on fixture A's ring; validate
    # reports the violation list and the run fails
    doc["modules"]["bad"] = {"kind": "cartier",
                             "carrier": {"actions": [[[0, 0], [1, 0]]]},
                             "structure": [[1, 0], [0, 1]]}
    doc["commands"] = [{"op": "validate", "module": "bad"},
                       {"op": "nilpotent", "module": "bad"}]
    path = write(tmp_path, doc)
    out = str(tmp_path / "rep.json")
    assert main(["run", path, "--json", out]) == 1
    rep = json.loads(open(out).read())
    assert rep["results"][0]["ok"] is False
    assert any("equivariance" in v for v in rep["results"][0]["violations"])
    assert rep["results"][1]["ok"] is False   # other ops refuse invalid data
    # a failing mathematical check: perverse on a degree-0 free crystal
    doc2 = json.loads(json.dumps(FIXTURE_A))
    doc2["modules"]["free"] = {"tier": "pid", "kind": "cartier", "free": [[1]]}
    doc2["commands"] = [{"op": "perverse", "module": "free", "degree": 0}]
    path2 = write(tmp_path, doc2, "fail.json")
    assert main(["run", path2]) == 1
    capsys.readouterr()


def test_empty_command_list(tmp_path, capsys):
    doc = json.loads(json.dumps(FIXTURE_A))
    doc["commands"] = []
    path = write(tmp_path, doc)
    assert main(["run", path]) == 0
    capsys.readouterr()


@pytest.mark.parametrize("kind,count", [("random-artinian", 3),
                                        ("random-pid-torsion", 3)])
def test_generate_roundtrip(tmp_path, capsys, kind, count):
    out = str(tmp_path / "gen.json")
    assert main(["generate", kind, "--seed", "0", "--count", str(count),
                 "--out", out]) == 0
    assert main(["run", out]) == 0
    capsys.readouterr()


def test_generate_size_zero_gives_empty_run(tmp_path, capsys):
    out = str(tmp_path / "empty.json")
    assert main(["generate", "random-artinian", "--seed", "0",
                 "--count", "0", "--out", out]) == 0
    doc = json.loads(open(out).read())
    assert doc["modules"] == {} and doc["commands"] == []
    assert main(["run", out]) == 0
    capsys.readouterr()


def test_generate_deterministic(tmp_path, capsys):
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    for o in (a, b):
        assert main(["generate", "random-artinian", "--seed", "7",
                     "--count", "2", "--out", o]) == 0
    assert open(a, "rb").read() == open(b, "rb").read()
    capsys.readouterr()


def test_generate_elliptic_scan(tmp_path, capsys):
    out = str(tmp_path / "ell.json")
    assert main(["generate", "elliptic-scan", "--p", "5", "--out", out]) == 0
    doc = json.loads(open(out).read())
    assert len(doc["commands"]) == 20
    assert main(["run", out]) == 0
    capsys.readouterr()


def test_sol_and_base_change_commands(tmp_path, capsys):
    doc = {
        "schema": 1,
        "field": {"p": 2, "r": 1},
        "ring": {"tier": "artinian", "vars": ["x"], "relations": [[2]]},
        "modules": {"frob": {"kind": "frobenius",
                             "carrier": {"actions": [[[0, 0], [1, 0]]]},
                             "structure": [[1, 0], [0, 0]]}},
        "commands": [{"op": "sol", "module": "frob", "s": 2},
                     {"op": "base-change", "module": "frob", "s": 2},
                     {"op": "stable", "module": "frob"}],
    }
    path = write(tmp_path, doc)
    out = str(tmp_path / "rep.json")
    assert main(["run", path, "--json", out]) == 0
    rep = json.loads(open(out).read())
    by_op = {r["op"]: r for r in rep["results"]}
    assert by_op["sol"]["dim_fq"] == 1 and by_op["sol"]["geometric_dim"] == 1
    assert by_op["base-change"]["ok"]
    capsys.readouterr()


def test_suite_command(tmp_path, capsys):
    doc = {"schema": 1, "field": {"p": 2, "r": 1},
           "commands": [{"op": "suite", "seed": 3, "count": 4}]}
    path = write(tmp_path, doc)
    out = str(tmp_path / "rep.json")
    assert main(["run", path, "--json", out]) == 0
    rep = json.loads(open(out).read())
    r = rep["results"][0]
    assert r["ok"] and r["double_dual"] == 4 and r["local_duality"] == 4
    capsys.readouterr()


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "cartierforge.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "forge" in proc.stdout
