import numpy as np
import pytest

from pactrecon import AcousticConstants, GridSpec, PressureSeries, ring_geometry


@pytest.fixture
def consts():
    return AcousticConstants(c=1.5, beta_over_cp=1000.0)


@pytest.fixture
def small_ring():
    return ring_geometry(16, 5.0)


@pytest.fixture
def random_pressure(small_ring):
    rng = np.random.default_rng(42)
    return PressureSeries(
        geometry=small_ring, dt=0.1, samples=rng.standard_normal((16, 64))
    )


@pytest.fixture
def centered_grid():
    return GridSpec.centered((32, 32), (0.25, 0.25))
