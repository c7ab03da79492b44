"""Synthetic data: a vehicle-like multi-sensor extract and planted-pattern series.

The bundled extract under ``coinmotif/data/vehicle`` was written by
:func:`write_vehicle_extract` with the defaults below; the tests regenerate it
and compare bytes.
"""

import csv
from importlib import resources
from pathlib import Path

import numpy as np

from .core import TimeSeries
from .oracle import PlantedSpec, generate_planted

VEHICLE_SENSORS = ("speed", "engine_rpm", "throttle", "coolant_temp", "brake_pressure")


def _smooth_step(n):
    t = np.linspace(0.0, 1.0, n)
    return t * t * (3.0 - 2.0 * t)


def _trip(rng, length):
    """Speed profile [km/h] made of stops, accelerations, cruises and brakings."""
    speed = np.zeros(length)
    t, v = 0, 0.0
    while t < length:
        target = float(rng.choice([0.0, 30.0, 50.0, 80.0]))
        if target == v:
            target = 0.0 if v > 0 else 50.0
        # accelerating and braking have fixed shapes; only the endpoints vary
        ramp = 25 if target > v else 15
        seg = v + (target - v) * _smooth_step(ramp)
        hold = int(rng.integers(40, 160))
        jitter = rng.normal(0.0, 0.8, hold) if target > 0 else np.zeros(hold)
        seg = np.concatenate([seg, target + np.convolve(jitter, np.ones(5) / 5, mode="same")])
        n = min(seg.size, length - t)
        speed[t:t + n] = seg[:n]
        t += n
        v = target
    return np.maximum(speed, 0.0)


def vehicle_run(seed, length=2400):
    """One run of every sensor in :data:`VEHICLE_SENSORS`, 1 Hz."""
    rng = np.random.default_rng(seed)
    speed = _trip(rng, length)
    accel = np.gradient(speed)
    gear = np.clip(np.ceil(speed / 22.0), 1, 5)
    rpm = 800.0 + speed * 95.0 / gear + np.maximum(accel, 0.0) * 120.0 + rng.normal(0.0, 15.0, length)
    throttle = np.clip(12.0 + accel * 9.0 + speed * 0.15 + rng.normal(0.0, 0.7, length), 0.0, 100.0)
    warm = 90.0 - 70.0 * np.exp(-np.arange(length) / 400.0)
    coolant = warm + rng.normal(0.0, 0.05, length)
    brake = np.clip(-accel, 0.0, None) * 6.0
    return {
        "speed": np.round(speed, 3),
        "engine_rpm": np.round(rpm, 1),
        "throttle": np.round(throttle, 2),
        "coolant_temp": np.round(coolant, 3),
        "brake_pressure": np.round(brake, 3),
    }


def write_vehicle_extract(directory, n_runs=12, length=2400, seed=2024, dead_sensor_run=2):
    """Write ``run_XX.csv`` files (header: ``t`` plus the sensors) and return their paths.

    In run ``dead_sensor_run`` the brake sensor is stuck at zero.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    seeds = np.random.SeedSequence(seed).generate_state(n_runs)
    paths = []
    for k in range(n_runs):
        cols = vehicle_run(int(seeds[k]), length)
        if k == dead_sensor_run:
            cols["brake_pressure"] = np.zeros(length)
        path = directory / f"run_{k:02d}.csv"
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(("t",) + VEHICLE_SENSORS)
            for i in range(length):
                out.writerow([i] + [repr(float(cols[s][i])) for s in VEHICLE_SENSORS])
        paths.append(path)
    return paths


def bundled_extract_dir():
    """Directory of the bundled vehicle extract."""
    return Path(str(resources.files("coinmotif") / "data" / "vehicle"))


def bundled_extract_paths():
    return sorted(bundled_extract_dir().glob("run_*.csv"))


def sine_pattern(w, amplitude=3.0):
    return amplitude * np.sin(2.0 * np.pi * np.arange(w) / w)


def planted_series(length, w=40, seed=0, per_50k=60, levels=(0.0, 4.0), noise_sigma=0.06):
    """White noise with a sine pattern planted ``per_50k`` times per 50k samples."""
    count = max(len(levels), int(round(per_50k * length / 50_000)))
    spec = PlantedSpec(sine_pattern(w), count, tuple(levels), noise_sigma, seed, length)
    return generate_planted(spec)


def as_series(values, id="series", sensor="synthetic"):
    return TimeSeries(id, np.asarray(values, dtype=np.float64), sensor)
