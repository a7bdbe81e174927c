import csv
import json
import subprocess
import sys

import pytest

from dynmorse.cli import run


def manifest(out):
    return json.loads((out / "run_manifest.json").read_text())


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_tile_ok(tmp_path):
    assert run(["tile", "--cube-edge", "100", "--tile-edge", "10", "--eps", "0.05", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "placements.csv")
    assert len(rows) == 10 and list(rows[0]) == ["tile_index", "center_0", "covered"]
    m = manifest(tmp_path)
    assert m["subcommand"] == "tile" and m["exit_code"] == 0 and "placements.csv" in m["outputs"]
    assert {"artifact", "python", "numpy", "scipy"} <= set(m["versions"])


def test_tile_window_file_and_failure(tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("d=1\n" + "".join(f"{k}\n" for k in range(10)))
    assert run(["tile", "--window", str(w), "--tile-edge", "4", "--eps", "0.1", "--out", str(tmp_path)]) == 2
    assert manifest(tmp_path)["exit_code"] == 2


def test_entropy(tmp_path):
    out = tmp_path / "e"
    assert run(["entropy", "--spec", "s1", "--grid", "5", "--pigeonhole", "10", "10",
                "--n", "100", "--out", str(out)]) == 0
    rows = read_csv(out / "profile.csv")
    assert len(rows) == 25 and "-inf" in {r["value"] for r in rows}
    assert manifest(out)["summary"]


def test_entropy_exact_needs_n(tmp_path):
    assert run(["entropy", "--spec", "s1", "--mode", "exact", "--grid", "3", "--out", str(tmp_path)]) == 1


def test_crystal(tmp_path, capsys):
    assert run(["crystal", "--chain", "4", "--out", str(tmp_path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary
    pts = read_csv(tmp_path / "points.csv")
    assert len(pts) == 16
    assert (tmp_path / "spectrum.csv").exists()


def test_crystal_reproducible(tmp_path):
    args = ["crystal", "--grid-size", "2", "2", "--K", "0.05", "--interval", "0.4", "0.7"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    for name in ("points.csv", "spectrum.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_crystal_too_many_sites(tmp_path):
    assert run(["crystal", "--chain", "20", "--out", str(tmp_path)]) == 1


def test_analyze(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("spec = s1\ni_max = 6\nresolution = 9\nsegments = 40\n"
                   "nu_schedule = 0.2, 0.1\ndelta_schedule = 0.2, 0.1\ndyadic_n = 8\n")
    out = tmp_path / "a"
    assert run(["analyze", "--config", str(cfg), "--out", str(out)]) == 0
    for name in ("limit.csv", "concavity.csv", "usc.csv"):
        assert (out / name).exists()
    assert read_csv(out / "limit.csv")


def test_analyze_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nu_schedule = 0.1, 0.2\n")
    assert run(["analyze", "--config", str(cfg), "--out", str(tmp_path)]) == 1


@pytest.mark.parametrize("argv", [[], ["bogus"], ["tile", "--eps", "0.1"], ["crystal", "--chain", "x"]])
def test_usage_errors(argv, capsys):
    assert run(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_figures(tmp_path):
    pytest.importorskip("matplotlib")
    assert run(["entropy", "--spec", "s1", "--grid", "5", "--figures", "--out", str(tmp_path)]) == 0
    assert list(tmp_path.glob("*.png"))


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "dynmorse", "tile", "--cube-edge", "10", "--tile-edge", "3",
                          "--eps", "0.1", "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
