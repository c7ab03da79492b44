"""Wall-clock benchmarks, emitted as tab-delimited tables.

Every timing is the minimum over ``repeats`` runs after one untimed warm-up
(jit compilation and cache effects are not what is being measured). In the
scaling benchmark the repeats are interleaved across lengths.
"""

from dataclasses import dataclass
import time

import numpy as np

from . import kernels
from ._backend import available_backends, get_backend, set_backend
from .core import PipelineParams, TimeSeries
from .datasets import planted_series
from .extract import discover_motifs
from .oracle import NAIVE_CAP, naive_frequent_motifs

SCALING_COLUMNS = ("length", "strategy", "backend", "seconds", "ratio", "subsequences", "clusters", "motifs")
KERNEL_COLUMNS = ("kernel", "size", "backend", "seconds", "speedup")


@dataclass
class BenchRow:
    length: int
    strategy: str
    backend: str
    seconds: float
    ratio: float | None = None
    subsequences: int = 0
    clusters: int = 0
    motifs: int = 0


def best_time(fn, repeats=3, warmup=True):
    """Minimum wall time of ``fn()`` over ``repeats`` calls, and the last result."""
    if warmup:
        fn()
    best, result = np.inf, None
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def _with_ratios(rows):
    prev = {}
    for r in rows:
        key = (r.strategy, r.backend)
        if key in prev and prev[key] > 0:
            r.ratio = r.seconds / prev[key]
        prev[key] = r.seconds
    return rows


def bench_scaling(lengths, strategies=("birch", "lsh"), backends=None, seed=0, w=40, s=10,
                  repeats=3, oracle=False, oracle_cap=NAIVE_CAP, source=None):
    """Pipeline wall time per length, strategy and backend.

    Parameters
    ----------
    lengths : sequence of int
        Series lengths, normally a doubling ladder.
    strategies : sequence of str
        Clustering strategies; ``"oracle"`` may be listed to time the
        exhaustive quadratic search (only on lengths up to ``oracle_cap``).
    backends : sequence of str, optional
        Kernel backends; defaults to the active one.
    seed : int
        Seed of the synthetic planted-pattern series.
    source : ndarray, optional
        Use prefixes of this series instead of synthetic data.
    oracle : bool
        Shorthand for appending ``"oracle"`` to ``strategies``.

    Returns
    -------
    list of BenchRow
        ``ratio`` is the time over the previous length of the same
        strategy/backend.
    """
    strategies = list(strategies) + (["oracle"] if oracle and "oracle" not in strategies else [])
    backends = list(backends) if backends else [get_backend()]
    lengths = [int(n) for n in lengths]
    rows = []
    if not lengths:
        return rows
    data = {}
    for n in lengths:
        if source is not None:
            if n > len(source):
                raise ValueError(f"source has {len(source)} samples, cannot take {n}")
            data[n] = TimeSeries(f"prefix_{n}", np.asarray(source[:n], dtype=np.float64), "bench")
        else:
            data[n] = planted_series(n, w=w, seed=seed).series
    params = PipelineParams(w=w, s=s, lsh_seed=seed)
    previous = get_backend()
    try:
        for backend in backends:
            set_backend(backend)
            kernels.warmup()
            for strategy in strategies:
                runnable = [n for n in lengths if strategy != "oracle" or n <= oracle_cap]
                jobs = {n: _bench_job(strategy, data[n], params, oracle_cap) for n in runnable}
                best = {n: np.inf for n in runnable}
                result = {}
                # warm-up pass, then repeats interleaved across lengths so slow
                # spells of a shared machine hit every length alike
                for n in runnable:
                    result[n] = jobs[n]()
                for _ in range(max(1, repeats)):
                    for n in runnable:
                        t, result[n] = best_time(jobs[n], 1, warmup=False)
                        best[n] = min(best[n], t)
                for n in runnable:
                    rows.append(_bench_row(n, strategy, backend, best[n], result[n], w))
    finally:
        set_backend(previous)
    return _with_ratios(rows)


def _bench_job(strategy, series, params, oracle_cap):
    if strategy == "oracle":
        return lambda: naive_frequent_motifs(series, params.w, params.R, params.s, params.d, cap=oracle_cap)
    return lambda: discover_motifs(series, params, strategy)


def _bench_row(n, strategy, backend, seconds, result, w):
    if strategy == "oracle":
        return BenchRow(n, strategy, backend, seconds, None, n - w + 1, 0, len(result))
    st = result.stages
    return BenchRow(n, strategy, backend, seconds, None, st["subsequences"], st["clusters"], st["motifs"])


def doubling_ratios(rows, strategy, backend=None):
    """Consecutive time ratios for one strategy (and backend) in length order."""
    sel = sorted((r for r in rows if r.strategy == strategy and (backend is None or r.backend == backend)),
                 key=lambda r: r.length)
    return [b.seconds / a.seconds for a, b in zip(sel, sel[1:])]


def scaling_table(rows):
    """Tab-delimited text with a header line."""
    lines = ["\t".join(SCALING_COLUMNS)]
    for r in rows:
        lines.append("\t".join([
            str(r.length), r.strategy, r.backend, f"{r.seconds:.6f}",
            "" if r.ratio is None else f"{r.ratio:.3f}",
            str(r.subsequences), str(r.clusters), str(r.motifs),
        ]))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# kernel backends


def _kernel_cases(size, seed):
    rng = np.random.default_rng(seed)
    w, d = 20, 10
    windows = rng.standard_normal((size, w))
    X = rng.standard_normal((size, d)) * 0.7
    S = rng.standard_normal((size, d))
    rows = np.arange(0, size, 7, dtype=np.int64)
    centroid = S[rows].mean(axis=0)
    return {
        "paa": lambda: kernels.paa(windows, d),
        "coin_basic": lambda: kernels.coin_basic(X, 1.0),
        "trivial_keep_mask": lambda: kernels.trivial_keep_mask(S, rows, centroid, 2.0),
    }


def bench_backends(sizes=(2000, 8000), seed=0, repeats=3):
    """Time each hot kernel under every backend. Returns ``(kernel, size, backend, seconds, speedup)`` rows.

    ``speedup`` is the numpy time over the numba time (filled on numba rows).
    """
    previous = get_backend()
    out = []
    try:
        for size in sizes:
            cases = _kernel_cases(size, seed)
            times = {}
            for backend in available_backends():
                set_backend(backend)
                for name, fn in cases.items():
                    times[name, backend] = best_time(fn, repeats)[0]
            for name in cases:
                for backend in available_backends():
                    t = times[name, backend]
                    speedup = times[name, "numpy"] / t if backend == "numba" and t > 0 else None
                    out.append((name, size, backend, t, speedup))
    finally:
        set_backend(previous)
    return out


def backend_table(rows):
    lines = ["\t".join(KERNEL_COLUMNS)]
    for name, size, backend, t, speedup in rows:
        lines.append("\t".join([name, str(size), backend, f"{t:.6f}", "" if speedup is None else f"{speedup:.2f}"]))
    return "\n".join(lines) + "\n"
