import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from qcnt.cli import config_to_argv, main, parse_fraction

GOLDEN = Path(__file__).parent / "golden"
PHI = (1 + math.sqrt(5)) / 2


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name,argv", [
    ("modelset_d5_closed_r5.csv", ["modelset", "--d", "5", "--x", "0", "--closed", "--range", "5"]),
    ("zeta_d5_s4.json", ["zeta", "--d", "5", "--x", "0", "--s", "4", "--method", "direct"]),
    ("pink_d5_m8.json", ["pink", "--d", "5", "--x", "0", "--m-max", "8"]),
    ("field_d7.json", ["field", "--d", "7"]),
    ("theta_lattice_half.json", ["theta-check", "--lattice", "--t", "1/2"]),
])
def test_golden_outputs(capsys, name, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_modelset_example_rows(capsys):
    _, out, _ = run(capsys, "modelset", "--d", "5", "--x", "0", "--closed", "--range", "5")
    lines = out.splitlines()
    assert lines[0].startswith("# ") and lines[1] == "a,b,value,conj_value"
    values = [float(row.split(",")[2]) for row in lines[2:]]
    assert values == pytest.approx([1, PHI, PHI ** 2, PHI ** 3], rel=1e-15)


def test_zeta_example_fields(capsys):
    _, out, _ = run(capsys, "zeta", "--d", "5", "--x", "0", "--s", "4", "--method", "direct")
    doc = json.loads(out)
    assert doc["schema"] == "qcnt/1"
    assert set(doc["result"]) >= {"s", "value_re", "value_im", "error_bound", "rigorous",
                                  "method", "cutoff"}
    assert doc["result"]["rigorous"] is True


def test_pink_example_distances_decrease(capsys):
    _, out, _ = run(capsys, "pink", "--d", "5", "--x", "0", "--m-max", "8")
    dist = [v for v in json.loads(out)["result"]["set_distances"] if v is not None]
    assert len(dist) >= 6
    assert all(b < a for a, b in zip(dist, dist[1:]))


def test_determinism(capsys):
    argv = ["trig", "--d", "5", "--zeros", "20", "--at", "0.5,1/3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


@pytest.mark.parametrize("argv", [
    ["zeta", "--lattice", "--s", "1/2", "--method", "continued", "--cutoff", "1000"],
    ["lambda", "--d", "5", "--x", "-3", "--s", "2"],
    ["j", "--d", "2", "--x", "1/2", "--cutoff", "1000"],
    ["jqt", "--eps", "1/3,1/5,1/9", "--n-max", "20000"],
    ["jqt", "--m-min", "3", "--m-max", "5"],
    ["modelset", "--d", "10", "--x", "3/2", "--range", "30", "--format", "json"],
    ["modelset", "--d", "3", "--range", "30", "--signed"],
    ["curve", "--samples", "300", "--cutoff", "500", "--format", "csv"],
    ["curve", "--samples", "300", "--cutoff", "500"],
    ["pink", "--m-min", "3", "--m-max", "4", "--format", "csv"],
    ["trig", "--lattice", "--step", "0.5", "--pi-terms", "100", "--cutoff", "2000"],
])
def test_artifacts_replay_to_the_same_bytes(capsys, tmp_path, argv):
    artifact = tmp_path / "artifact"
    code, summary, _ = run(capsys, *argv, "--output", str(artifact))
    assert code == 0 and summary.strip()
    code, replayed, _ = run(capsys, "--replay", str(artifact))
    assert code == 0
    assert replayed == artifact.read_text()


def test_config_is_exact(capsys):
    _, out, _ = run(capsys, "j", "--d", "5", "--x", "2/7", "--cutoff", "100")
    assert json.loads(out)["config"]["x"] == "2/7"
    assert config_to_argv("j", {"d": 5, "x": "2/7", "lattice": False, "closed": True}) == \
        ["j", "--d", "5", "--x", "2/7", "--closed"]


@pytest.mark.parametrize("argv,code,kind", [
    (["bogus"], 2, "usage"),
    (["zeta", "--s", "2", "--frobnicate"], 2, "usage"),
    ([], 2, "usage"),
    (["field", "--d", "4"], 2, "invalid-input"),
    (["zeta", "--s", "1/2"], 2, "domain"),
    (["modelset", "--x", "0.1.2"], 2, "usage"),
    (["modelset", "--range", "-3"], 2, "usage"),
    (["jqt", "--eps", "1/5,1/3"], 2, "invalid-input"),
    (["jqt", "--m-min", "20", "--m-max", "21", "--n-max", "100"], 3, "completeness"),
    (["pink", "--d", "7"], 2, "unsupported-field"),
])
def test_error_exit_codes(capsys, argv, code, kind):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    assert json.loads(err)["error"] == kind


def test_replay_rejects_foreign_files(capsys, tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text('{"schema": "other/9"}')
    code, _, err = run(capsys, "--replay", str(bad))
    assert code == 2 and json.loads(err)["error"] == "invalid-input"


def test_fraction_parsing():
    assert str(parse_fraction("3/4")) == "3/4"
    assert str(parse_fraction("0.25")) == "1/4"


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "qcnt.cli", "field", "--d", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["fu"] == ["1", "1"]
