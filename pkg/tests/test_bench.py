import numpy as np

from coinmotif.bench import (
    KERNEL_COLUMNS,
    SCALING_COLUMNS,
    backend_table,
    bench_backends,
    bench_scaling,
    best_time,
    doubling_ratios,
    scaling_table,
)


def test_best_time_takes_minimum():
    calls = []
    t, result = best_time(lambda: calls.append(1) or len(calls), repeats=3)
    assert len(calls) == 4 and result == 4 and t >= 0


def test_scaling_structure():
    rows = bench_scaling([2000, 4000, 8000], ["birch"], w=40, s=5, repeats=1)
    assert [r.length for r in rows] == [2000, 4000, 8000]
    assert rows[0].ratio is None and rows[1].ratio is not None
    assert all(r.seconds > 0 and r.subsequences == r.length - 39 for r in rows)
    lines = scaling_table(rows).splitlines()
    assert lines[0].split("\t") == list(SCALING_COLUMNS)
    assert len(lines) == 4
    assert len(doubling_ratios(rows, "birch")) == 2


def test_empty_lengths():
    assert bench_scaling([]) == []
    assert scaling_table([]) == "\t".join(SCALING_COLUMNS) + "\n"


def test_oracle_rows_respect_cap():
    rows = bench_scaling([500, 1000, 2000], ["oracle"], w=20, s=5, repeats=1, oracle_cap=1000)
    assert [r.length for r in rows] == [500, 1000]
    assert all(r.strategy == "oracle" for r in rows)


def test_file_backed_source():
    source = np.sin(np.arange(5000) / 7.0) + np.random.default_rng(0).normal(0, 0.1, 5000)
    rows = bench_scaling([1000, 2000], ["lsh"], w=20, s=5, repeats=1, source=source)
    assert len(rows) == 2


def test_backend_table():
    rows = bench_backends(sizes=(500,), repeats=1)
    kernels = {r[0] for r in rows}
    assert kernels == {"paa", "coin_basic", "trivial_keep_mask"}
    text = backend_table(rows)
    assert text.splitlines()[0].split("\t") == list(KERNEL_COLUMNS)
