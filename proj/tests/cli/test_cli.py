import json
import math
import os
import shutil
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("RDCHAIN_BIN", "rdchain")
GOLDEN = Path(os.environ.get("RDCHAIN_GOLDEN", Path(__file__).resolve().parents[1] / "golden"))


def rdchain(*args, cwd=None):
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, cwd=cwd)


def write_config(tmp_path, text, name="cfg.json"):
    path = tmp_path / name
    path.write_text(text)
    return path


def named_values(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "name,value"
    return {k: float(v) for k, v in (line.split(",") for line in lines[1:])}


def test_constants_experiment(tmp_path):
    cfg = write_config(tmp_path, '{"experiment": "constants"}')
    res = rdchain("run", "--config", cfg, "--out", tmp_path / "out")
    assert res.returncode == 0, res.stderr
    values = named_values(tmp_path / "out" / "constants.csv")
    assert list(values) == ["c", "tau_star", "c_bar", "a_star"]
    assert abs(values["c"] - 0.0935918) < 1e-6
    assert abs(values["c_bar"] - 0.0218988) < 1e-6
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["experiment"] == "constants"
    assert len(manifest["config_hash"]) == 16
    assert "wall_time_s" in manifest and "library_version" in manifest


def test_unknown_experiment_is_a_usage_error(tmp_path):
    cfg = write_config(tmp_path, '{\n  "experiment": "nope"\n}')
    res = rdchain("run", "--config", cfg)
    assert res.returncode == 2
    assert "cfg.json:2" in res.stderr


def test_unknown_key_names_its_line(tmp_path):
    cfg = write_config(tmp_path, '{\n  "experiment": "erm_sparse",\n  "q": 0.5,\n  "colour": 1\n}')
    res = rdchain("run", "--config", cfg)
    assert res.returncode == 2
    assert "cfg.json:4" in res.stderr and "colour" in res.stderr


@pytest.mark.parametrize(
    "body",
    [
        '{"experiment": "erm_sparse", "q": 1.5}',
        '{"experiment": "erm_toy", "replicas": 3}',
        '{"experiment": "erm_toy", "n_grid": [64, 128]}',
        '{"experiment": "erm_ellipsoid", "map": "relu"}',
        '{"experiment": "rd_curve", "points": [[0, 1], [2]]}',
        '{"experiment": "erm_toy", "seed": -1}',
        '{"experiment": "erm_toy",',
        "[1, 2]",
    ],
)
def test_schema_violations(tmp_path, body):
    res = rdchain("run", "--config", write_config(tmp_path, body))
    assert res.returncode == 2
    assert "cfg.json:" in res.stderr


def test_shortcut_rejects_mismatched_experiment(tmp_path):
    cfg = write_config(tmp_path, '{"experiment": "constants"}')
    assert rdchain("erm-sparse", "--config", cfg).returncode == 2


def test_same_seed_gives_identical_outputs(tmp_path):
    cfg = write_config(tmp_path, '{"experiment": "erm_sparse", "d": 128, "replicas": 12}')
    for out, threads in (("a", 1), ("b", 4)):
        assert rdchain("run", "--config", cfg, "--out", tmp_path / out, "--seed", 5, "--threads", threads).returncode == 0
    for name in ("trials.csv", "report.csv", "fit.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    ma = json.loads((tmp_path / "a" / "manifest.json").read_text())
    mb = json.loads((tmp_path / "b" / "manifest.json").read_text())
    ma.pop("wall_time_s"), mb.pop("wall_time_s")
    assert ma == mb
    rdchain("run", "--config", cfg, "--out", tmp_path / "c", "--seed", 6)
    assert (tmp_path / "a" / "trials.csv").read_bytes() != (tmp_path / "c" / "trials.csv").read_bytes()


def test_every_csv_has_a_header(tmp_path):
    for sub, body in (
        ("rd-curve", '{"grid_points": 16}'),
        ("erm-ellipsoid", '{"replicas": 10, "n_grid": [64, 128, 256, 512]}'),
        ("sandwich", '{"instances": 2, "mc_samples": 500, "pairs": 256}'),
    ):
        out = tmp_path / sub
        res = rdchain(sub, "--config", write_config(tmp_path, body, sub + ".json"), "--out", out)
        assert res.returncode == 0, res.stderr
        manifest = json.loads((out / "manifest.json").read_text())
        for name in manifest["files"]:
            header = (out / name).read_text().splitlines()[0]
            assert header and not header[0].isdigit() and not header.startswith("-")


def test_emit_plotdata_matches_fit(tmp_path):
    cfg = write_config(tmp_path, '{"experiment": "erm_toy", "n_grid": [64, 128, 256, 512], "replicas": 20}')
    assert rdchain("run", "--config", cfg, "--out", tmp_path / "run").returncode == 0
    res = rdchain("emit-plotdata", tmp_path / "run" / "report.csv", "--out", tmp_path / "plot")
    assert res.returncode == 0, res.stderr
    rows = [l for l in (tmp_path / "plot.dat").read_text().splitlines() if not l.startswith("#")]
    assert len(rows) == 4
    assert all(len(r.split()) == 2 for r in rows)
    assert abs(float(rows[0].split()[0]) - math.log(64)) < 1e-15
    sidecar = [l for l in (tmp_path / "plot.fit").read_text().splitlines() if not l.startswith("#")]
    slope, intercept = map(float, sidecar[0].split())
    fitted = named_values(tmp_path / "run" / "fit.csv")["slope"]
    assert abs(slope - fitted) <= 1e-12


def test_emit_plotdata_rejects_bad_reports(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert rdchain("emit-plotdata", empty).returncode == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("n,mean_mse,se,replicas\n64,abc,1,10\n")
    res = rdchain("emit-plotdata", bad)
    assert res.returncode == 2 and "bad.csv:2" in res.stderr
    assert rdchain("emit-plotdata", tmp_path / "missing.csv").returncode == 2


def test_verify_fast_passes():
    res = rdchain("verify", "fast")
    assert res.returncode == 0, res.stdout
    assert res.stdout.count("PASS") == 14


def test_verify_names_a_corrupted_golden_file(tmp_path):
    golden = tmp_path / "golden"
    shutil.copytree(GOLDEN, golden)
    path = golden / "constants.csv"
    path.write_text(path.read_text().replace("0.0935", "0.0936"))
    res = rdchain("verify", "fast", "--golden", golden)
    assert res.returncode == 1
    assert "golden constants.csv" in res.stdout.splitlines()[-1]
    (golden / "binary_rd.csv").write_text("name,value\n0.05,oops\n")
    res = rdchain("verify", "fast", "--golden", golden)
    assert res.returncode == 1 and "binary_rd.csv" in res.stdout.splitlines()[-1]
