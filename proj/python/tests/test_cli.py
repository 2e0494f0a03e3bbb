import json
import os
import shutil
import subprocess

import pytest

EXE = os.environ.get("VORWAVE_EXE") or shutil.which("vorwave")

pytestmark = pytest.mark.skipif(EXE is None, reason="vorwave executable not found")


def run(*args):
    return subprocess.run([EXE, *args], capture_output=True, text=True)


def write_config(path, **extra):
    cfg = {"vorticity": {"kind": "constant", "gamma": 0.0}, "grid": {"Nq": 32, "Np": 24}}
    cfg.update(extra)
    path.write_text(json.dumps(cfg))
    return str(path)


def test_dispersion(tmp_path):
    cfg = write_config(tmp_path / "cfg.json")
    out = tmp_path / "disp"
    r = run("dispersion", "--config", cfg, "--out", str(out))
    assert r.returncode == 0, r.stderr
    files = list(out.glob("*.json"))
    data = [json.loads(f.read_text()) for f in files if f.name != "manifest.json"]
    assert any(abs(d.get("lambda_c", 0) - 4.5826) < 1e-4 for d in data)
    assert (out / "manifest.json").exists()


def test_missing_config_exits_2(tmp_path):
    out = tmp_path / "none"
    r = run("pipeline", "--config", str(tmp_path / "absent.json"), "--out", str(out))
    assert r.returncode == 2
    assert not out.exists() or not any(out.iterdir())


def test_unknown_key_exits_2(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", bogus=1)
    assert run("dispersion", "--config", cfg, "--out", str(tmp_path / "o")).returncode == 2


def test_gerstner_rejects_unit_steepness(tmp_path):
    cfg = write_config(tmp_path / "cfg.json")
    r = run("gerstner", "--config", cfg, "--eps", "1.0", "--out", str(tmp_path / "g.csv"))
    assert r.returncode == 2


def test_pipeline(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", continuation={"steps": 4})
    out = tmp_path / "run"
    r = run("pipeline", "--config", cfg, "--out", str(out))
    assert r.returncode == 0, r.stderr
    report = json.loads((out / "report.json").read_text())
    assert report["all_pass"] is True
    assert report["summary"]["points"] == 5
    assert len(list(out.glob("point_*.json"))) == 5
