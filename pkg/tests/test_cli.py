import csv
import io
import json
import subprocess
import sys

import pytest

from chainbruhat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_examples(capsys):
    assert run(capsys, "count", "--ring", "zpk:p=2,k=3", "--n", "2") == (0, "4\n", "")
    code, out, _ = run(capsys, "count", "--ring", "zpk:p=2,k=2", "--n", "3")
    assert (code, out) == (0, "18\n")
    code, out, _ = run(capsys, "count", "--ring", "zpk:p=2,k=2", "--n", "3", "--method", "oracle")
    assert (code, out) == (0, "18\n")
    code, out, _ = run(capsys, "count", "--ring", "zpk:p=2,k=1", "--n", "4", "--format", "json")
    assert json.loads(out) == {"ring": "zpk:p=2,k=1", "n": 4, "method": "oracle", "count": 24}


def test_count_argument_errors(capsys):
    code, _, err = run(capsys, "count", "--ring", "zpk:p=4,k=2", "--n", "2")
    assert code == 2 and "error" in err
    assert run(capsys, "count", "--n", "2")[0] == 2
    assert run(capsys, "count", "--ring", "zpk:p=2,k=2")[0] == 2
    assert run(capsys, "count", "--ring", "zpk:p=2,k=2", "--n", "0")[0] == 2
    assert run(capsys, "count", "--ring", "zpk:p=2,k=2", "--n", "4", "--method", "closed")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_budget_exceeded_exits_1(capsys):
    code, _, err = run(capsys, "count", "--ring", "zpk:p=3,k=2", "--n", "4", "--budget", "1000")
    assert code == 1 and "budget" in err


def test_equiv_examples(capsys):
    base = ["equiv", "--ring", "zpk:p=2,k=2", "--n", "2"]
    assert run(capsys, *base, "--a", "1,0;2,1", "--b", "1,0;0,1") == (0, "false\n", "")
    assert run(capsys, *base, "--a", "1,0;2,1", "--b", "3,1;2,1")[1] == "true\n"
    code, out, _ = run(capsys, *base, "--a", "1,0;2,1", "--b", "1,0;2,1", "--format", "json", "--method", "linear")
    assert json.loads(out)["equivalent"] is True
    assert run(capsys, *base, "--a", "1,0;2", "--b", "1,0;0,1")[0] == 2
    assert run(capsys, *base, "--a", "1,0,0;0,1,0;0,0,1", "--b", "1,0;0,1")[0] == 2


def test_invariants_command(capsys):
    code, out, _ = run(capsys, "invariants", "--ring", "zpk:p=2,k=2", "--matrix", "1,0;2,1")
    assert code == 0
    data = json.loads(out)
    assert data["W"] == [1, 2] and data["r"] == [[1, 1], [1, 1]] and data["profile"]["1,1"] == [1]
    code, out, _ = run(capsys, "invariants", "--ring", "fqtk:q=3,k=2", "--random", "--n", "3", "--seed", "5")
    again = run(capsys, "invariants", "--ring", "fqtk:q=3,k=2", "--random", "--n", "3", "--seed", "5")[1]
    assert code == 0 and out == again
    code, out, _ = run(capsys, "invariants", "--ring", "zpk:p=2,k=2", "--matrix", "1,0;2,1", "--format", "table")
    assert code == 0 and out.startswith("matrix")
    rows = list(csv.DictReader(io.StringIO(run(capsys, "invariants", "--ring", "zpk:p=2,k=2", "--matrix", "1,0;2,1", "--format", "csv")[1])))
    assert len(rows) == 9
    assert run(capsys, "invariants", "--ring", "zpk:p=2,k=2", "--matrix", "2,0;0,1")[0] == 2
    assert run(capsys, "invariants", "--ring", "zpk:p=2,k=2", "--random")[0] == 2


def test_canonical_command(capsys):
    code, out, _ = run(capsys, "canonical", "--ring", "zpk:p=2,k=2", "--matrix", "3,2;0,1")
    assert code == 0 and out.splitlines()[0] == "1,0;0,1"
    code, out, _ = run(capsys, "canonical", "--ring", "zpk:p=2,k=2", "--random", "--n", "3", "--format", "json")
    assert set(json.loads(out)) == {"ring", "input", "canonical", "index"}


def test_enumerate_command(capsys):
    code, out, _ = run(capsys, "enumerate", "--ring", "zpk:p=2,k=2", "--n", "2", "--format", "json")
    assert code == 0 and json.loads(out)["num_cosets"] == 3
    code, out, _ = run(capsys, "enumerate", "--ring", "zpk:p=2,k=2", "--n", "3", "--method", "labels", "--format", "json")
    assert len(json.loads(out)["cosets"]) == 18
    code, out, _ = run(capsys, "enumerate", "--ring", "zpk:p=2,k=2", "--n", "3", "--format", "csv")
    assert len(out.splitlines()) == 19
    code, out, _ = run(capsys, "enumerate", "--ring", "zpk:p=2,k=1", "--n", "3")
    assert code == 0 and "[3 2 1]" in out
    assert run(capsys, "enumerate", "--ring", "zpk:p=2,k=2", "--n", "2", "--method", "labels")[0] == 2


def test_census_command(capsys, tmp_path):
    target = tmp_path / "census.csv"
    args = ["census", "--p", "2", "--k", "1,2", "--n", "2", "--out", str(target)]
    code, out, _ = run(capsys, *args)
    assert code == 0 and out == ""
    rows = list(csv.DictReader(target.open()))
    assert list(rows[0]) == ["flavor", "p", "k", "n", "fiber", "count", "total"]
    assert {(r["k"], r["total"]) for r in rows} == {("1", "2"), ("2", "3")}
    code, out2, _ = run(capsys, *args[:-2], "--threads", "2")
    assert out2 == target.read_text()
    assert run(capsys, "census", "--flavors", "zpq")[0] == 2
    assert run(capsys, "census", "--p", "4")[0] == 2
    assert run(capsys, "census", "--p", "3", "--k", "2", "--n", "4", "--budget", "100")[0] == 1


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "bmb")
    assert code == 0 and "bmb: PASS" in out
    # the growth suite asserts ceil(k/3), which the stratum scan contradicts
    code, out, _ = run(capsys, "verify", "growth", "--format", "json")
    data = json.loads(out)
    assert code == 1 and data[0]["passed"] is False
    assert data[0]["checks"]["lower bound c k^2 q^floor(k/3)"] is True


def test_config_file(capsys, tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"ring": "zpk:p=3,k=2", "n": 2, "format": "json"}))
    code, out, _ = run(capsys, "count", "--config", str(conf))
    assert code == 0 and json.loads(out)["count"] == 3
    # flags on the command line win over the file
    code, out, _ = run(capsys, "count", "--config", str(conf), "--ring", "zpk:p=3,k=3")
    assert json.loads(out)["count"] == 4
    conf.write_text(json.dumps({"colour": "blue"}))
    assert run(capsys, "count", "--config", str(conf))[0] == 2
    assert run(capsys, "count", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chainbruhat", "count", "--ring", "fqtk:q=3,k=3", "--n", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "40\n"


@pytest.mark.parametrize("fmt", ["table", "json", "csv"])
def test_count_formats_are_deterministic(capsys, fmt):
    argv = ["count", "--ring", "fqtk:q=2,k=3", "--n", "3", "--format", fmt]
    assert run(capsys, *argv) == run(capsys, *argv)
