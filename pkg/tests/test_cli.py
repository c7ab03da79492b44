import shutil
import subprocess
import sys

import pytest

from coinmotif import catalog as cat_io
from coinmotif.cli import EXIT_CONFIG, EXIT_DATA, EXIT_OK, main
from coinmotif.datasets import bundled_extract_dir, bundled_extract_paths

EXTRACT_GLOB = str(bundled_extract_dir() / "*.csv")


@pytest.fixture
def small_runs(tmp_path):
    d = tmp_path / "runs"
    d.mkdir()
    for p in bundled_extract_paths()[:3]:
        shutil.copy(p, d / p.name)
    return str(d / "*.csv")


def run(argv):
    return main([str(a) for a in argv])


def test_basic_run_writes_catalog(small_runs, tmp_path):
    out = tmp_path / "out"
    code = run(["--input", small_runs, "--sensor", "speed,engine_rpm", "--support", 5, "--out", out, "--plots"])
    assert code == EXIT_OK
    doc = cat_io.load(out / "catalog.json")
    assert [s["sensor"] for s in doc["sensors"]] == ["speed", "engine_rpm"]
    assert doc["params"]["w"] == 20 and doc["params"]["R"] == 1
    assert len(doc["inputs"]) == 3
    n_motifs = sum(len(s["motifs"]) for s in doc["sensors"])
    assert n_motifs > 0
    assert len(list((out / "plots").glob("*.svg"))) == n_motifs


def test_huge_support_gives_no_motifs_but_stages(small_runs, tmp_path):
    out = tmp_path / "out"
    assert run(["--input", small_runs, "--sensor", "speed", "--support", 10**9, "--out", out]) == EXIT_OK
    (sensor,) = cat_io.load(out / "catalog.json")["sensors"]
    assert sensor["motifs"] == []
    assert sensor["stages"]["subsequences"] > 0 and sensor["stages"]["motifs"] == 0
    assert "after_trivial_removal_members" in sensor["stages"]


def test_same_config_twice_identical(small_runs, tmp_path):
    texts = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run(["--input", small_runs, "--sensor", "throttle", "--support", 5, "--accel", "lsh", "--out", out]) == 0
        texts.append(cat_io.dumps(cat_io.without_timing(cat_io.load(out / "catalog.json"))))
    assert texts[0] == texts[1]


def test_jobs_keep_sensor_order(small_runs, tmp_path):
    docs = []
    for jobs in (1, 2):
        out = tmp_path / f"j{jobs}"
        assert run(["--input", small_runs, "--support", 5, "--jobs", jobs, "--out", out]) == EXIT_OK
        docs.append(cat_io.without_timing(cat_io.load(out / "catalog.json")))
    assert docs[0] == docs[1]
    assert [s["sensor"] for s in docs[0]["sensors"]] == [
        "speed", "engine_rpm", "throttle", "coolant_temp", "brake_pressure"]


def test_missing_sensor_is_isolated(small_runs, tmp_path):
    out = tmp_path / "out"
    code = run(["--input", small_runs, "--sensor", "speed", "--sensor", "oil_temp", "--support", 5, "--out", out])
    assert code == EXIT_DATA
    speed, oil = cat_io.load(out / "catalog.json")["sensors"]
    assert speed["status"] == "ok"
    assert oil["status"] == "error" and oil["error"]["kind"] == "data"


def test_bad_values_exit_2(tmp_path):
    (tmp_path / "r.csv").write_text("t,x\n0,1\n1,oops\n")
    assert run(["--input", tmp_path / "*.csv", "--sensor", "x", "--out", tmp_path / "o"]) == EXIT_DATA


def test_dead_sensor_warns_not_fails(tmp_path):
    out = tmp_path / "out"
    assert run(["--input", EXTRACT_GLOB, "--sensor", "brake_pressure", "--out", out]) == EXIT_OK
    (sensor,) = cat_io.load(out / "catalog.json")["sensors"]
    assert any("run_02" in w for w in sensor["warnings"])


@pytest.mark.parametrize("argv", [
    ["--input", "/nonexistent/*.csv"],
    ["--window", "1"],
    ["--radius", "-1"],
    ["--support", "0"],
    ["--paa-dim", "50"],
    ["--accel", "kmeans"],
    ["--jobs", "0"],
    ["--window", "abc"],
    [],
])
def test_config_errors_exit_1(argv, small_runs, tmp_path):
    if "--input" not in argv and argv != []:
        argv = ["--input", small_runs, *argv]
    assert run([*argv, "--out", tmp_path / "o"]) == EXIT_CONFIG
    assert not (tmp_path / "o" / "catalog.json").exists()


def test_bench_flag(tmp_path):
    out = tmp_path / "b"
    code = run(["--bench", "--bench-lengths", "2000,4000", "--bench-repeats", 1, "--window", 40,
                "--support", 5, "--accel", "birch", "--out", out])
    assert code == EXIT_OK
    lines = (out / "bench.tsv").read_text().splitlines()
    assert lines[0].split("\t")[:4] == ["length", "strategy", "backend", "seconds"]
    assert len(lines) == 3


def test_module_entry_point(small_runs, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "coinmotif", "--input", small_runs, "--sensor", "speed",
                           "--support", "5", "--out", str(tmp_path / "o")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "1/1 sensors" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "coinmotif", "--support", "0"], capture_output=True, text=True)
    assert proc.returncode == 1


def test_bundled_extract_defaults_fixture(tmp_path):
    # supports recorded from the default run (w=20, birch) on the bundled extract
    out = tmp_path / "out"
    assert run(["--input", EXTRACT_GLOB, "--out", out]) == EXIT_OK
    doc = cat_io.load(out / "catalog.json")
    supports = {s["sensor"]: [m["support"] for m in s["motifs"]] for s in doc["sensors"]}
    assert supports == {
        "speed": [89, 85, 75],
        "engine_rpm": [99, 92, 91, 88, 51],
        "throttle": [127, 81, 59, 94, 118, 125, 53],
        "coolant_temp": [],
        "brake_pressure": [109, 83],
    }
    # coolant warms up smoothly: every window is removed by the deviation filter
    coolant = doc["sensors"][3]["stages"]
    assert coolant["subsequences"] > 0 and coolant["after_deviation_filter"] == 0
