import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from dgblend.cli import main
from dgblend.io import read_csv
from dgblend.perf import PERF_HEADER

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SOD = """
[case]
name = sod
[mesh]
elements = 16
periodic = false
[discretization]
degree = 3
[time]
end_time = 0.05
"""

FREESTREAM = """
[case]
name = freestream
[mesh]
elements = 2, 2
[discretization]
degree = 2
[time]
steps = 2
[campaign]
meshes = 2x2
cores = 1, 2, 8
"""


@pytest.fixture
def cfg_file(tmp_path):
    def make(text, name="case.cfg"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return make


def test_list_cases(capsys):
    assert main(["list-cases"]) == 0
    err = capsys.readouterr().err
    for name in ("freestream", "sod", "vortex", "wall-model-sweep", "scaling-campaign"):
        assert name in err


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.cfg")))
def test_shipped_configs_validate(name):
    assert main(["validate-config", str(CONFIGS / name)]) == 0


def test_invalid_config_exits_1(cfg_file):
    path = cfg_file(SOD.replace("degree = 3", "degree = 0"))
    assert main(["validate-config", str(path)]) == 1
    assert main(["run", "--config", str(path)]) == 1
    assert main(["validate-config", str(path.parent / "missing.cfg")]) == 1
    assert main(["run"]) == 1


def test_run_writes_outputs(cfg_file, tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg_file(SOD)), "--output-dir", str(out)]) == 0
    schema, header, rows = read_csv(out / "state.csv")
    assert schema == "dgblend-state v1" and len(rows) == 16 * 4
    schema, header, rows = read_csv(out / "diagnostics.csv")
    assert schema == "dgblend-diagnostics v1"
    assert float(rows[-1][1]) == pytest.approx(0.05)
    mass = np.array([float(r[3]) for r in rows])
    assert np.all(np.isfinite(mass))


def test_step_override_and_env(cfg_file, tmp_path, monkeypatch):
    env_out = tmp_path / "env"
    monkeypatch.setenv("DGBLEND_OUTPUT_DIR", str(env_out))
    monkeypatch.setenv("DGBLEND_THREADS", "2")
    assert main(["run", "--config", str(cfg_file(SOD)), "--steps", "3"]) == 0
    _, _, rows = read_csv(env_out / "diagnostics.csv")
    assert len(rows) == 3
    # flag beats environment
    flag_out = tmp_path / "flag"
    assert main(["run", "--config", str(cfg_file(SOD)), "--steps", "1", "--output-dir", str(flag_out)]) == 0
    assert (flag_out / "state.csv").exists()
    monkeypatch.setenv("DGBLEND_THREADS", "many")
    assert main(["run", "--config", str(cfg_file(SOD)), "--steps", "1"]) == 1


def test_runtime_failure_exits_2(cfg_file, tmp_path, capsys):
    path = cfg_file(SOD.replace("end_time = 0.05", "steps = 3\ndt = 5.0"))
    assert main(["run", "--config", str(path), "--output-dir", str(tmp_path)]) == 2
    assert "step 1: RK stage" in capsys.readouterr().err


def test_scale_writes_perf_csv(cfg_file, tmp_path):
    out = tmp_path / "scale"
    assert main(["scale", "--config", str(cfg_file(FREESTREAM)), "--output-dir", str(out), "--repeats", "2"]) == 0
    text = (out / "perf.csv").read_text().splitlines()
    assert text[0] == "# dgblend-perf v1"
    assert text[1] == PERF_HEADER
    schema, header, rows = read_csv(out / "perf.csv")
    assert len(rows) == 2 * 2 + 1
    assert rows[-1][4] == "8" and rows[-1][7] == "-1"
    assert (out / "perf.speedup.csv").exists()


def test_sweep_wall_model(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep-wall-model", "--ma", "0.72", "--gamma", "1.4", "--pr", "0.72", "--output", str(out)]) == 0
    schema, header, rows = read_csv(out)
    assert header == ["y_plus", "u_plus_spalding", "u_plus_van_driest", "u_plus_edge"]
    assert len(rows) == 200 and schema.startswith("dgblend-wall-sweep v1")
    data = np.array(rows, dtype=float)
    assert data[0, 0] == pytest.approx(0.1) and data[-1, 0] == pytest.approx(1000.0)
    assert np.all(np.diff(data[:, 1]) > 0)
    # the printed recovery ratio is below one at this Mach number, so the edge form is undefined
    assert main(["sweep-wall-model", "--ma", "0.72", "--edge-ratio", "printed", "--output", str(out)]) == 1
    assert main(["sweep-wall-model", "--ma", "-1", "--output", str(out)]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dgblend", "list-cases"], capture_output=True, text=True)
    assert proc.returncode == 0 and "sod" in proc.stderr
