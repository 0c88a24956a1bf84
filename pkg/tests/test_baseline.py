import time

import numpy as np
import numpy.testing as npt
import pytest

from pactrecon import (
    AcousticConstants,
    GridSpec,
    PressureSeries,
    TimeAxis,
    ValidationError,
    analytic_sphere_forward,
    delay_and_sum,
    fibonacci_sphere_geometry,
    ring_geometry,
)


@pytest.fixture(scope="module")
def consts():
    return AcousticConstants(c=1.5, beta_over_cp=1000.0)


def test_zero_data_zero_image(consts):
    geom = ring_geometry(8, 5.0)
    data = PressureSeries(geometry=geom, dt=0.1, samples=np.zeros((8, 64)))
    grid = GridSpec.centered((16, 16), (0.25, 0.25))
    img = delay_and_sum(data, grid, consts)
    assert np.all(img.values == 0)


def test_linearity(consts):
    geom = ring_geometry(8, 5.0)
    rng = np.random.default_rng(1)
    a = rng.standard_normal((8, 64))
    b = rng.standard_normal((8, 64))
    grid = GridSpec.centered((16, 16), (0.25, 0.25))

    def run(samples):
        return delay_and_sum(
            PressureSeries(geometry=geom, dt=0.1, samples=samples), grid, consts
        ).values

    combo = run(3.0 * a - 0.25 * b)
    expect = 3.0 * run(a) - 0.25 * run(b)
    assert np.abs(combo - expect).max() <= 1e-12 * np.abs(expect).max()


def test_dimension_mismatch_rejected(consts):
    geom = ring_geometry(4, 5.0)
    data = PressureSeries(geometry=geom, dt=0.1, samples=np.zeros((4, 8)))
    with pytest.raises(ValidationError):
        delay_and_sum(data, GridSpec.centered((8, 8, 8), 0.5), consts)


def test_sphere_peak_location(consts):
    # 3D N-wave data backprojects to a flat-top blob over the sphere; the
    # half-max centroid sits at the sphere center within a voxel
    center = np.array([0.9, -0.6, 0.3])
    geom = fibonacci_sphere_geometry(128, 12.8)
    data = analytic_sphere_forward(center, 1.5, 1.0, geom, TimeAxis(0.1, 128), consts)
    grid = GridSpec.centered((32, 32, 32), (0.3, 0.3, 0.3))
    img = delay_and_sum(data, grid, consts)
    top = img.values >= 0.5 * img.values.max()
    idx = np.argwhere(top)
    centroid = idx.mean(axis=0)
    expect = np.array([c / 0.3 + 16 for c in center])
    assert np.abs(centroid - expect).max() <= 1.0


def test_out_of_window_contributes_zero(consts):
    geom = ring_geometry(4, 5.0)
    # the recorded window covers almost nothing: every lookup beyond it is 0
    samples = np.ones((4, 4))
    data = PressureSeries(geometry=geom, dt=0.01, samples=samples)
    grid = GridSpec.centered((8, 8), (0.1, 0.1))
    img = delay_and_sum(data, grid, consts)
    assert np.all(img.values == 0.0)  # all grid points are > 3 samples away


@pytest.mark.perf
def test_runtime_scales_with_pixels(consts):
    # doubling the pixel count should double the runtime (within 25 %)
    geom = ring_geometry(128, 12.8)
    rng = np.random.default_rng(2)
    data = PressureSeries(geometry=geom, dt=0.05, samples=rng.standard_normal((128, 512)))

    def measure(n):
        grid = GridSpec.centered((n, n), (12.8 / n, 12.8 / n))
        best = np.inf
        for _ in range(3):
            t0 = time.perf_counter()
            delay_and_sum(data, grid, consts)
            best = min(best, time.perf_counter() - t0)
        return best

    t1 = measure(181)  # ~2x the pixels of 128^2
    t0 = measure(128)
    ratio = t1 / t0
    assert 1.5 <= ratio <= 2.5, f"pixel-doubling time ratio {ratio:.2f}"
