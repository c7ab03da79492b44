"""Command-line front end: discover motifs in run files, or benchmark.

Exit codes: 0 success, 1 configuration error, 2 data error (some sensor
could not be processed), 3 internal invariant violation.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import glob
import logging
from pathlib import Path
import sys
import traceback

from . import catalog as cat_io
from ._backend import available_backends, set_backend
from .bench import backend_table, bench_backends, bench_scaling, scaling_table
from .coin import STRATEGIES
from .core import PipelineParams
from .errors import ConfigError, DataError, InvariantViolation
from .extract import discover_motifs
from .io import load_column, load_runs, sensor_columns
from .plots import write_motif_plots

logger = logging.getLogger("coinmotif")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_INVARIANT = 0, 1, 2, 3
DEFAULT_BENCH_LENGTHS = (25_000, 50_000, 100_000, 200_000)


@dataclass
class RunConfig:
    """Everything :func:`run_pipeline` needs; built and validated before any work."""

    inputs: list
    sensors: list
    params: PipelineParams
    strategy: str = "birch"
    out: Path = Path("coinmotif_out")
    plots: bool = False
    jobs: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _int_list(text):
    try:
        return [int(float(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser():
    p = _Parser(prog="coinmotif", description="Frequent motif discovery in sensor time series.")
    p.add_argument("--input", metavar="GLOB", help="run files (comma-delimited, header row, one file per run)")
    p.add_argument("--sensor", action="append", metavar="NAME",
                   help="sensor column; repeat or comma-separate for several (default: every column but time)")
    p.add_argument("--window", type=int, default=20, metavar="W", help="window length in samples (default 20)")
    p.add_argument("--radius", type=float, metavar="R", help="COIN radius (default sqrt(W/20))")
    p.add_argument("--support", type=int, default=50, metavar="S", help="minimum support, strict (default 50)")
    p.add_argument("--filter", type=float, default=1.0, metavar="F", help="minimum max-min deviation (default 1)")
    p.add_argument("--paa-dim", type=int, metavar="D", help="reduced dimension (default min(W//2, 10))")
    p.add_argument("--accel", choices=STRATEGIES, help="candidate-set strategy (default birch)")
    p.add_argument("--branching", type=int, default=50, metavar="B", help="CF-tree branching factor")
    p.add_argument("--lsh-r", type=int, default=3, help="hash functions per bucket id")
    p.add_argument("--lsh-b", type=int, default=5, help="bucket ids (tables) per vector")
    p.add_argument("--lsh-width", type=float, default=4.0, help="LSH quantization width as a multiple of R")
    p.add_argument("--seed", type=int, default=0, help="seed for LSH planes and synthetic benchmark data")
    p.add_argument("--order-seed", type=int, help="shuffle the clustering order with this seed")
    p.add_argument("--level-eps", type=float, default=0.5, help="level-split DBSCAN eps (z units)")
    p.add_argument("--level-min-pts", type=int, default=2, help="level-split DBSCAN minPts")
    p.add_argument("--out", default="coinmotif_out", metavar="DIR", help="output directory")
    p.add_argument("--plots", action="store_true", help="write one SVG per motif")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (sensors run in parallel)")
    p.add_argument("--backend", choices=available_backends(), help="kernel backend (default from environment)")
    p.add_argument("--bench", action="store_true", help="run the scaling benchmark instead")
    p.add_argument("--bench-lengths", type=_int_list, default=list(DEFAULT_BENCH_LENGTHS),
                   help="comma-separated series lengths (default 25000,50000,100000,200000)")
    p.add_argument("--bench-backends", default=None, help="comma-separated kernel backends to compare")
    p.add_argument("--bench-repeats", type=int, default=3)
    p.add_argument("--bench-oracle", action="store_true", help="also time the quadratic reference search")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _params_from_args(a):
    if a.window < 2:
        raise ConfigError(f"--window must be >= 2 (got {a.window})")
    if a.radius is not None and not a.radius > 0:
        raise ConfigError(f"--radius must be > 0 (got {a.radius})")
    try:
        return PipelineParams(
            w=a.window, R=a.radius, s=a.support, f=a.filter, d=a.paa_dim,
            lsh_seed=a.seed, branching=a.branching, lsh_r=a.lsh_r, lsh_b=a.lsh_b,
            lsh_width=a.lsh_width, level_eps=a.level_eps, level_min_pts=a.level_min_pts,
            order_seed=a.order_seed,
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def config_from_args(a):
    params = _params_from_args(a)
    if a.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1 (got {a.jobs})")
    if not a.input:
        raise ConfigError("--input is required")
    inputs = sorted(glob.glob(a.input))
    if not inputs:
        raise ConfigError(f"--input {a.input!r} matches no files")
    sensors = []
    for item in a.sensor or []:
        sensors.extend(s.strip() for s in item.split(",") if s.strip())
    if not sensors:
        try:
            sensors = sensor_columns(inputs[0])
        except DataError as exc:
            raise ConfigError(f"cannot infer sensors: {exc}") from None
        if not sensors:
            raise ConfigError(f"{inputs[0]}: no sensor columns")
    if len(set(sensors)) != len(sensors):
        raise ConfigError("duplicate --sensor names")
    out = Path(a.out)
    if out.exists() and not out.is_dir():
        raise ConfigError(f"--out {out} exists and is not a directory")
    return RunConfig(inputs, sensors, params, a.accel or "birch", out, a.plots, a.jobs)


def _run_sensor(task):
    """Worker: one sensor end to end. Never raises; failures become error docs."""
    sensor, cfg = task
    try:
        runs = load_runs(cfg.inputs, sensor)
        catalog = discover_motifs(runs, cfg.params, cfg.strategy, sensor=sensor)
        plots = []
        if cfg.plots:
            plots = [str(p) for p in write_motif_plots(catalog, cfg.out / "plots")]
        return EXIT_OK, cat_io.sensor_doc(catalog), plots
    except InvariantViolation as exc:
        return EXIT_INVARIANT, cat_io.failed_sensor_doc(sensor, "invariant", f"{type(exc).__name__}: {exc}"), []
    except (DataError, ValueError) as exc:
        return EXIT_DATA, cat_io.failed_sensor_doc(sensor, "data", f"{type(exc).__name__}: {exc}"), []
    except Exception as exc:  # noqa: BLE001  anything else is a bug
        logger.debug("sensor %s: %s", sensor, traceback.format_exc())
        return EXIT_INVARIANT, cat_io.failed_sensor_doc(sensor, "internal", f"{type(exc).__name__}: {exc}"), []


def run_pipeline(cfg):
    """Run every sensor, write ``catalog.json`` (and plots) under ``cfg.out``.

    Returns ``(document, exit_code)``. A failing sensor does not stop the
    others; the exit code is the most severe outcome.
    """
    cfg.out.mkdir(parents=True, exist_ok=True)
    tasks = [(s, cfg) for s in cfg.sensors]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.jobs, len(tasks))) as pool:
            results = list(pool.map(_run_sensor, tasks))
    else:
        results = [_run_sensor(t) for t in tasks]
    code = max((r[0] for r in results), default=EXIT_OK)
    for _, doc, _ in results:
        if doc["status"] != "ok":
            logger.error("sensor %s failed: %s", doc["sensor"], doc["error"]["message"])
    doc = cat_io.catalog_doc(cfg.params, cfg.strategy, [r[1] for r in results], cfg.inputs)
    cat_io.dump(doc, cfg.out / "catalog.json")
    return doc, code


def run_bench(a):
    lengths = a.bench_lengths
    if any(n < 2 for n in lengths):
        raise ConfigError("--bench-lengths must be positive")
    if a.bench_repeats < 1:
        raise ConfigError("--bench-repeats must be >= 1")
    params = _params_from_args(a)
    backends = None
    if a.bench_backends:
        backends = [b.strip() for b in a.bench_backends.split(",") if b.strip()]
        bad = [b for b in backends if b not in available_backends()]
        if bad:
            raise ConfigError(f"unknown or unavailable backends: {bad}")
    strategies = [a.accel] if a.accel else ["birch", "lsh"]
    source = None
    if a.input:
        files = sorted(glob.glob(a.input))
        if not files:
            raise ConfigError(f"--input {a.input!r} matches no files")
        if not a.sensor:
            raise ConfigError("--bench with --input needs --sensor")
        source = load_column(files[0], a.sensor[0].split(",")[0])
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = bench_scaling(lengths, strategies, backends, seed=a.seed, w=params.w, s=params.s,
                         repeats=a.bench_repeats, oracle=a.bench_oracle, source=source)
    table = scaling_table(rows)
    (out / "bench.tsv").write_text(table)
    sys.stdout.write(table)
    if backends and len(backends) > 1:
        ktable = backend_table(bench_backends(seed=a.seed, repeats=a.bench_repeats))
        (out / "bench_kernels.tsv").write_text(ktable)
        sys.stdout.write(ktable)
    return EXIT_OK


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        a = build_parser().parse_args(argv)
        if a.verbose:
            logger.setLevel(logging.DEBUG)
        if a.backend:
            set_backend(a.backend)
        if a.bench:
            return run_bench(a)
        cfg = config_from_args(a)
        doc, code = run_pipeline(cfg)
        ok = sum(1 for s in doc["sensors"] if s["status"] == "ok")
        print(f"{ok}/{len(doc['sensors'])} sensors processed; catalog at {cfg.out / 'catalog.json'}")
        return code
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
