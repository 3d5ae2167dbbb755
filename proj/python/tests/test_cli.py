import json
import os
import subprocess

import numpy as np
import pytest

CLI = os.environ.get("SURVSCORE_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="SURVSCORE_CLI not set")


def run(*args, cwd):
    return subprocess.run([CLI, *args], cwd=cwd, capture_output=True, text=True)


@pytest.fixture
def fixture_csv(tmp_path):
    path = tmp_path / "fix.csv"
    path.write_text("id,time,status,z1\n1,10,1,2\n2,20,1,1\n3,30,1,0\n")
    return path


def test_diagnose_round_trip(tmp_path, fixture_csv):
    r = run("diagnose", str(fixture_csv), "--out", "d", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    data = np.genfromtxt(tmp_path / "d" / "process.csv", delimiter=",", names=True, skip_header=1)
    assert np.allclose(data["t"], [0, 0.5, 1])
    assert np.allclose(data["u1"], [0, 0.8660254037844385, 1.5731321849709858], rtol=0, atol=1e-12)
    decisions = json.loads((tmp_path / "d" / "decisions.json").read_text())
    assert decisions["k_n"] == 2 and decisions["config"]["alpha"] == 0.05


def test_exit_codes(tmp_path, fixture_csv):
    assert run("diagnose", str(fixture_csv), "--alpha", "1.5", "--out", "x", cwd=tmp_path).returncode == 2
    same = tmp_path / "same.csv"
    same.write_text("id,time,status,z1\n1,1,1,1\n2,2,1,1\n3,3,1,1\n")
    assert run("diagnose", str(same), "--out", "x", cwd=tmp_path).returncode == 3
    cands = tmp_path / "c.json"
    cands.write_text('[{"component": 2, "basis": "constant"}]')
    assert run("fit", str(fixture_csv), "--candidates", str(cands), "--out", "x", cwd=tmp_path).returncode == 2
    assert run("reproduce", "--table", "7", "--out", "x", cwd=tmp_path).returncode == 2


def test_simulate_is_byte_identical(tmp_path):
    scen = tmp_path / "s.json"
    scen.write_text('{"n": 60, "true_effect": 0, "seed": 3}')
    for _ in range(2):
        assert run("simulate", str(scen), "--replicates", "5", "--out", "o", cwd=tmp_path).returncode == 0
        (tmp_path / f"copy{_}.json").write_bytes((tmp_path / "o" / "report.json").read_bytes())
    assert (tmp_path / "copy0.json").read_bytes() == (tmp_path / "copy1.json").read_bytes()
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["version"] and report["config"]["replicates"] == 5 and len(report["records"]) == 5


def test_reproduce_table_1(tmp_path):
    r = run("reproduce", "--table", "1", "--replicates", "20", "--out", "t", cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "t" / "table1.csv").read_text().splitlines()
    assert lines[0].startswith("# survscore")
    assert lines[3] == "reference,r2,0.25,0.35999999999999999,0.37,0.34000000000000002,0.34000000000000002"
