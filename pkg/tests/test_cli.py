from __future__ import annotations

import json
import subprocess
import sys

import pytest

from planardpp.cli import main, run, square_instance
from planardpp.graph import EDGE_DISJOINT
from planardpp.oracle import gen_instance


def _write(tmp_path, name, instance):
    path = tmp_path / name
    path.write_text(json.dumps(instance.to_json()))
    return str(path)


@pytest.fixture
def files(tmp_path):
    ed = gen_instance(0, "random-planar", {"n": 7, "k": 1, "mode": EDGE_DISJOINT})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    return {
        "serial": _write(tmp_path, "serial.json", square_instance([(0, 1), (2, 3)])),
        "crossing": _write(tmp_path, "crossing.json", square_instance([(0, 2), (1, 3)])),
        "edge": _write(tmp_path, "edge.json", ed),
        "malformed": str(bad),
        "missing": str(tmp_path / "nope.json"),
    }


def test_count_serial_square(files):
    code, rep = run(["count", files["serial"]])
    assert code == 0
    assert (rep["result"]["length"], rep["result"]["count"]) == (2, 1)
    assert rep["instance"] == square_instance([(0, 1), (2, 3)]).digest()


def test_decide_budget(files):
    code, rep = run(["decide", files["serial"], "--budget", "1"])
    assert code == 1 and rep["result"]["decision"] is False
    code, rep = run(["decide", files["serial"], "--budget", "2"])
    assert code == 0 and rep["result"]["decision"] is True


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["count", "@crossing"], 0),
        (["search", "@crossing"], 1),
        (["search", "@serial", "--method", "isolation", "--seed", "3"], 0),
        (["count", "@edge"], 2),
        (["edpp", "@serial"], 2),
        (["edpp", "@edge"], 0),
        (["oracle", "@serial"], 0),
        (["count", "@malformed"], 2),
        (["count", "@missing"], 2),
        (["telescope", "1-3,2-4"], 2),
        (["telescope", "1-8,2-5,3-4,6-7"], 0),
        (["gen", "--family", "annulus", "--param", "k=9"], 2),
        (["gen", "--family", "grid", "--param", "rows"], 2),
    ],
)
def test_exit_code_matrix(files, argv, expected):
    argv = [files[a[1:]] if a.startswith("@") else a for a in argv]
    code, rep = run(argv)
    assert code == expected == rep["exit_code"]
    if expected >= 2:
        assert rep["error"]["message"]


def test_selftest_reproduces_golden_telescope():
    code, rep = run(["selftest"])
    assert code == 0
    checks = {c["name"]: c for c in rep["result"]["checks"]}
    assert checks["telescope"]["passed"] and all(c["passed"] for c in checks.values())


def test_telescope_entries():
    code, rep = run(["telescope", "1-8,2-5,3-4,6-7"])
    entries = rep["result"]["entries"]
    assert code == 0 and len(entries) == 3
    assert all(e["coefficient"] == 1 for e in entries)


def _stdout_report(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    rep = json.loads(out)
    rep.pop("timing")
    return code, json.dumps(rep, sort_keys=True), out.count("\n")


def test_reports_identical_modulo_timing(files, capsys):
    argv = ["search", files["serial"], "--method", "isolation", "--seed", "7"]
    a = _stdout_report(capsys, argv)
    b = _stdout_report(capsys, argv)
    assert a == b and a[2] == 1
    assert json.loads(a[1])["seed"] == 7


def test_gen_writes_instance_and_dot(tmp_path):
    out, dot = tmp_path / "g.json", tmp_path / "g.dot"
    code, rep = run(["gen", "--family", "grid", "--seed", "1", "--param", "k=2", "--param", "order=parallel", "-o", str(out), "--dump-graph", str(dot)])
    assert code == 0
    assert json.loads(out.read_text())["n"] == 9
    assert dot.read_text().startswith("graph instance {")
    code, rep2 = run(["count", str(out)])
    assert code == 0 and rep2["instance"] == rep["instance"]


def test_jobs_from_environment(files, monkeypatch):
    monkeypatch.setenv("PLANARDPP_JOBS", "3")
    _, rep = run(["count", files["serial"]])
    assert rep["args"]["jobs"] == 3
    _, rep = run(["--jobs", "2", "count", files["serial"]])
    assert rep["args"]["jobs"] == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "planardpp", "count", files["serial"]], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["count"] == 1
    assert "count=1" in proc.stderr
