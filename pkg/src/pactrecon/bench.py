"""Benchmark harness: stage timings of the Fourier pipeline vs delay-and-sum.

Times are wall-clock, best of ``repeats`` runs on reproducible synthetic
data.  Rows carry (stage, n, sensors, seconds) and can be written as CSV
or plotted.  The cost model for the Fourier path is
Nk log Nk + Ns * Nk with Nk = (oversampling * N)^d.
"""

from __future__ import annotations

import csv
import time

import numpy as np

from .baseline import delay_and_sum
from .core import AcousticConstants, GridSpec, PressureSeries, ReconParams, ring_geometry
from .recon import reconstruct


def synthetic_data(n_sensors: int, nt: int, dt: float, radius: float, seed: int) -> PressureSeries:
    """Reproducible random traces; content is irrelevant for timing."""
    rng = np.random.default_rng(seed)
    geom = ring_geometry(n_sensors, radius)
    return PressureSeries(
        geometry=geom, dt=dt, samples=rng.standard_normal((n_sensors, nt))
    )


def run_benchmark(
    sizes=(64, 128, 256),
    n_sensors: int = 256,
    dt: float = 1.0 / 30.0,
    radius: float = 12.8,
    fov: float = 25.6,
    oversampling: int = 2,
    pad_factor: int = 8,
    repeats: int = 3,
    seed: int = 0,
) -> list[dict]:
    """Time reconstruction stages and the delay-and-sum baseline.

    nt scales with N (nt = 4 N) to match the cost model's assumption that
    time samples grow with the image size.
    """
    consts = AcousticConstants(c=1.5, beta_over_cp=1000.0)
    rows: list[dict] = []
    for n in sizes:
        data = synthetic_data(n_sensors, 4 * n, dt, radius, seed)
        grid = GridSpec.centered((n, n), (fov / n, fov / n))
        params = ReconParams(grid=grid, oversampling=oversampling, pad_factor=pad_factor)
        best: dict[str, float] = {}
        for _ in range(repeats):
            _, report = reconstruct(data, params, consts)
            for stage, sec in report.stage_seconds.items():
                best[stage] = min(best.get(stage, np.inf), sec)
        das = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            delay_and_sum(data, grid, consts)
            das = min(das, time.perf_counter() - t0)
        for stage, sec in best.items():
            rows.append(
                {"stage": f"fourier_{stage}", "n": n, "sensors": n_sensors, "seconds": sec}
            )
        rows.append({"stage": "delay_and_sum", "n": n, "sensors": n_sensors, "seconds": das})
    return rows


def fourier_cost_model(n: int, n_sensors: int, oversampling: int = 2, dim: int = 2) -> float:
    nk = float(oversampling * n) ** dim
    return nk * np.log2(nk) + n_sensors * nk


def loglog_slope(sizes, times, model_values) -> float:
    """Slope of log(time) against log(model); 1.0 means perfect agreement."""
    x = np.log(np.asarray(model_values, dtype=float))
    y = np.log(np.asarray(times, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def write_csv(rows, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=["stage", "n", "sensors", "seconds"])
        writer.writeheader()
        for r in rows:
            writer.writerow(r)
