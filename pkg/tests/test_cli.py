import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cliffpovm import cli
from cliffpovm.fiducials import save_fiducial_json


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_alpha_magic():
    code, out, _ = call("alpha", "--n", "3", "--fiducial", "magic")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema_version"] == 1 and doc["command"] == "alpha"
    assert doc["alpha"] == pytest.approx(1 / 27, abs=1e-15)


def test_alpha_explicit(tmp_path):
    path = tmp_path / "z.json"
    save_fiducial_json(path, np.array([1.0, 0.0]))
    code, out, _ = call("alpha", "--n", "1", "--fiducial", "explicit", "--fiducial-file", str(path))
    assert code == 0 and json.loads(out)["alpha"] == pytest.approx(0.5)


def test_seventeen_digits():
    _, out, _ = call("alpha", "--n", "3", "--fiducial", "magic")
    assert "0.037037037037037" in out
    assert cli.fmt_float(0.1) == "0.10000000000000001"


@pytest.mark.parametrize("cmd", [
    ["orbit-norm", "--n", "2"],
    ["bounds", "--n", "3", "--fiducial", "magic"],
    ["verify-moments", "--n", "1", "--count", "3"],
    ["uncertainty-lp", "--n", "3", "--grid-size", "200"],
    ["certainty", "--n", "2"],
    ["fig1", "--n-max", "2", "--grid-size", "200"],
    ["distinguish", "--n", "2"],
])
def test_commands_succeed_in_both_formats(cmd):
    code, out, _ = call(*cmd)
    assert code == 0
    assert json.loads(out)["command"] == cmd[0]
    code, out, _ = call(*cmd, "--format", "csv")
    assert code == 0
    meta, rows = cli.read_csv(out)
    assert meta["schema_version"] == 1 and rows


def test_fig1_defaults_to_all_levels():
    _, out, _ = call("fig1", "--n-max", "1", "--grid-size", "200", "--format", "csv")
    _, rows = cli.read_csv(out)
    assert [r["level"] for r in rows] == ["design2", "design3", "design4", "stabilizer"]


def test_uncertainty_defaults_to_stabilizer():
    _, out, _ = call("uncertainty-lp", "--n", "2", "--grid-size", "200")
    assert json.loads(out)["level"] == "stabilizer"


def test_csv_roundtrip():
    meta = {"schema_version": 1, "command": "x", "seed": 3}
    rows = [{"a": 1, "b": 0.1, "c": "s", "e": True, "f": None}, {"a": 2, "b": float("nan")}]
    m2, r2 = cli.read_csv(cli.to_csv(meta, rows))
    assert m2 == meta
    assert r2[0] == {"a": 1, "b": 0.1, "c": "s", "e": True, "f": None}
    assert np.isnan(r2[1]["b"])


def test_json_and_csv_agree():
    _, js, _ = call("bounds", "--n", "2")
    _, cs, _ = call("bounds", "--n", "2", "--format", "csv")
    doc = json.loads(js)
    _, rows = cli.read_csv(cs)
    for k, v in rows[0].items():
        assert doc[k] == v


def test_output_file(tmp_path):
    path = tmp_path / "o.json"
    code, out, _ = call("certainty", "--n", "1", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["command"] == "certainty"


def test_usage_errors(capsys):
    assert call("alpha")[0] == 2
    assert call("alpha", "--n", "1", "--fiducial", "explicit")[0] == 2
    assert call("alpha", "--n", "2", "--threads", "0")[0] == 2
    assert call("nosuchcommand")[0] == 2
    assert call("alpha", "--n", "1", "--format", "xml")[0] == 2
    capsys.readouterr()


def test_computation_errors():
    assert call("alpha", "--n", "1", "--fiducial", "bogus")[0] in (1, 2)
    code, _, err = call("uncertainty-lp", "--n", "2", "--grid-size", "10")
    assert code == 1 and "grid" in err


def test_stochastic_output_is_reproducible():
    args = ["orbit-norm", "--n", "2", "--fiducial", "magic", "--samples", "5000", "--seed", "4"]
    a = call(*args, "--threads", "1")[1]
    b = call(*args, "--threads", "3")[1]
    assert a == b
    doc = json.loads(a)
    assert doc["seed"] == 4 and doc["samples"] == 5000


def test_verify_moments_reports_error():
    code, _, err = call("verify-moments", "--n", "2", "--count", "2")
    assert code == 0 and "max relative error" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cliffpovm", "alpha", "--n", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["alpha"] == pytest.approx(0.5)
