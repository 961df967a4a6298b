import json
from importlib import resources

import jsonschema
import pytest

from fgraph.cli import run
from fgraph.graphs import cycle

SCHEMA = json.loads(resources.files("fgraph").joinpath("report.schema.json").read_text())
BANANA15 = ["14", "106", "454", "1366", "3002", "5006", "6434", "6436", "5004", "3004", "1364", "456", "104", "1"]


def call(capsys, *argv):
    code, rep = run(list(argv))
    out = capsys.readouterr().out
    if rep is not None:
        jsonschema.validate(rep, SCHEMA)
    return code, rep, out


def test_class_banana3(capsys):
    code, rep, _ = call(capsys, "class", "--family", "banana", "--n", "3")
    assert code == 0 and rep["result"]["projective_class"]["text_T"].replace(" ", "") in ("T+2", "2+T")


def test_check_f1_banana15(capsys):
    code, rep, _ = call(capsys, "check-f1", "--family", "banana", "--n", "15")
    assert code == 0
    assert rep["result"]["projective_class"]["T"]["coeffs"] == BANANA15


def test_negative_exit(capsys):
    code, rep, _ = call(capsys, "check-f1", "--family", "banana", "--n", "4", "--variety", "Y")
    assert code == 1 and rep["status"] == "negative"


def test_usage_errors(capsys, tmp_path):
    assert run(["psi", "--graph", str(tmp_path / "missing.json")])[0] == 2
    assert run(["psi", "--bogus"])[0] == 2
    assert run(["psi"])[0] == 2
    assert run(["class", "--family", "banana", "--n", "3", "--primes", "2,4"])[0] == 2
    assert run(["class", "--family", "banana", "--n", "3", "--budget", "0"])[0] == 2


def test_graph_file_and_out(tmp_path, capsys):
    gf = tmp_path / "g.json"
    gf.write_text(json.dumps(cycle(3).to_json()))
    out = tmp_path / "r.json"
    code, rep, printed = call(capsys, "psi", "--graph", str(gf), "--out", str(out))
    assert code == 0 and printed == ""
    assert json.loads(out.read_text()) == rep
    tf = tmp_path / "g.txt"
    tf.write_text(cycle(3).to_text())
    assert run(["psi", "--graph", str(tf)])[0] == 0


@pytest.mark.parametrize("argv", [
    ["chi", "--family", "cycle", "--n", "3"],
    ["arrangement", "--family", "banana", "--n", "3", "--oracle-primes", "2,3"],
    ["lambda", "--family", "banana", "--n", "3", "--oracle-primes", "2,3,5"],
    ["conf", "--family", "cycle", "--n", "3", "--dim", "2", "--oracle"],
    ["csm", "--family", "cycle", "--n", "2", "--q", "2,3"],
    ["corpus", "--max-edges", "2"],
])
def test_subcommands_validate(capsys, argv):
    code, rep, _ = call(capsys, *argv)
    assert code == 0 and rep["status"] == "ok"


def test_reports_byte_identical_across_jobs(capsys):
    run(["scan", "--max-edges", "4", "--jobs", "1"])
    a = capsys.readouterr().out
    run(["scan", "--max-edges", "4", "--jobs", "3"])
    b = capsys.readouterr().out
    run(["scan", "--max-edges", "4", "--jobs", "1"])
    c = capsys.readouterr().out
    assert a == b == c


def test_timings_flag(capsys):
    code, rep, _ = call(capsys, "psi", "--family", "cycle", "--n", "3", "--timings")
    assert "timings" in rep
    assert "timings" not in call(capsys, "psi", "--family", "cycle", "--n", "3")[1]


def test_arrangement_normals_file(tmp_path, capsys):
    f = tmp_path / "a.json"
    f.write_text(json.dumps({"ambient_dim": 3, "normals": [[1, 0, 0], [0, 1, 0]]}))
    code, rep, _ = call(capsys, "arrangement", "--normals", str(f), "--oracle-primes", "2,3,5,7")
    assert code == 0 and rep["result"]["oracle"]["matches"]
