import numpy as np
import numpy.testing as npt
import pytest

from pactrecon import (
    AcousticConstants,
    GridSpec,
    ObjectField,
    PressureSeries,
    ReconParams,
    SensorGeometry,
    Spectrum,
    ValidationError,
    fibonacci_sphere_geometry,
    k_grid_for,
    ring_geometry,
)


class TestGridSpec:
    def test_centered_origin(self):
        g = GridSpec.centered((8, 8), (0.5, 0.5))
        assert g.origin == (-2.0, -2.0)
        assert g.axis(0)[4] == 0.0

    def test_centered_odd(self):
        g = GridSpec.centered((9, 9), (1.0, 1.0))
        assert g.axis(0)[4] == 0.0

    def test_scalar_spacing_broadcast(self):
        g = GridSpec.centered((4, 4, 4), 0.5)
        assert g.spacing == (0.5, 0.5, 0.5)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(dim=1, shape=(4,), spacing=(1.0,), origin=(0.0,)),
            dict(dim=2, shape=(4, 0), spacing=(1.0, 1.0), origin=(0.0, 0.0)),
            dict(dim=2, shape=(4, 4), spacing=(1.0, -1.0), origin=(0.0, 0.0)),
            dict(dim=3, shape=(4, 4), spacing=(1.0, 1.0), origin=(0.0, 0.0)),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            GridSpec(**kwargs)


class TestGeometry:
    def test_ring_weight_sum_exact(self):
        for n in (1, 7, 64, 256):
            g = ring_geometry(n, 12.8)
            target = 2 * np.pi * 12.8
            assert abs(g.weights.sum() - target) <= 1e-12 * target

    def test_ring_positions_on_circle(self):
        g = ring_geometry(100, 3.0)
        npt.assert_allclose(np.linalg.norm(g.positions, axis=1), 3.0, rtol=1e-14)

    def test_fibonacci_weight_sum_exact(self):
        for n in (8, 128):
            g = fibonacci_sphere_geometry(n, 12.8)
            target = 4 * np.pi * 12.8**2
            assert abs(g.weights.sum() - target) <= 1e-12 * target

    def test_fibonacci_positions_on_sphere(self):
        g = fibonacci_sphere_geometry(64, 2.0)
        npt.assert_allclose(np.linalg.norm(g.positions, axis=1), 2.0, rtol=1e-14)

    def test_off_surface_sensor_rejected(self):
        pos = np.array([[1.0, 0.0], [0.0, 1.001]])
        with pytest.raises(ValidationError):
            SensorGeometry(dim=2, radius=1.0, positions=pos, weights=np.array([np.pi, np.pi]))

    def test_bad_weight_sum_rejected(self):
        pos = np.array([[1.0, 0.0], [-1.0, 0.0]])
        with pytest.raises(ValidationError):
            SensorGeometry(dim=2, radius=1.0, positions=pos, weights=np.array([1.0, 1.0]))


class TestFields:
    def test_object_shape_mismatch(self, centered_grid):
        with pytest.raises(ValidationError):
            ObjectField(grid=centered_grid, values=np.zeros((4, 4)))

    def test_object_nonfinite(self, centered_grid):
        v = np.zeros(centered_grid.shape)
        v[0, 0] = np.nan
        with pytest.raises(ValidationError):
            ObjectField(grid=centered_grid, values=v)

    def test_values_read_only(self, centered_grid):
        f = ObjectField(grid=centered_grid, values=np.zeros(centered_grid.shape))
        with pytest.raises(ValueError):
            f.values[0, 0] = 1.0

    def test_pressure_row_count(self, small_ring):
        with pytest.raises(ValidationError):
            PressureSeries(geometry=small_ring, dt=0.1, samples=np.zeros((4, 8)))

    def test_pressure_bad_dt(self, small_ring):
        with pytest.raises(ValidationError):
            PressureSeries(geometry=small_ring, dt=0.0, samples=np.zeros((16, 8)))


class TestSpectrum:
    def test_hermitian_asymmetry_zero_for_real_image(self):
        rng = np.random.default_rng(0)
        img = rng.standard_normal((8, 8))
        v = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(img)))
        kg = GridSpec.centered((8, 8), (0.1, 0.1))
        s = Spectrum(grid=kg, values=v)
        assert s.hermitian_asymmetry() < 1e-12

    def test_hermitian_asymmetry_detects_breakage(self):
        kg = GridSpec.centered((8, 8), (0.1, 0.1))
        v = np.zeros((8, 8), dtype=complex)
        v[5, 4] = 1.0 + 2.0j  # no conjugate partner
        s = Spectrum(grid=kg, values=v)
        assert s.hermitian_asymmetry() > 0.5

    def test_dc_index(self):
        kg = GridSpec.centered((8, 6), (0.1, 0.1))
        s = Spectrum(grid=kg, values=np.zeros((8, 6), dtype=complex))
        assert s.dc_index == (4, 3)


class TestConstants:
    def test_grueneisen(self):
        c = AcousticConstants(c=1.5, beta_over_cp=1000.0)
        assert c.grueneisen_pressure == 1000.0 * 1.5**2

    def test_consistent_beta_cp(self):
        AcousticConstants(c=1.5, beta_over_cp=2.0, beta=4.0, cp=2.0)

    def test_inconsistent_beta_cp(self):
        with pytest.raises(ValidationError):
            AcousticConstants(c=1.5, beta_over_cp=2.0, beta=4.0, cp=3.0)

    @pytest.mark.parametrize("kwargs", [dict(c=0.0, beta_over_cp=1.0),
                                        dict(c=1.0, beta_over_cp=-1.0)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            AcousticConstants(**kwargs)


class TestReconParams:
    def test_k_grid_relation(self, centered_grid):
        params = ReconParams(grid=centered_grid, oversampling=2)
        kg = params.k_grid()
        assert kg.shape == (64, 64)
        for d in range(2):
            npt.assert_allclose(
                kg.spacing[d] * kg.shape[d] * centered_grid.spacing[d], 2 * np.pi
            )
            assert kg.origin[d] == -(kg.shape[d] // 2) * kg.spacing[d]
        # DC sits exactly at the center index
        assert kg.axis(0)[kg.shape[0] // 2] == 0.0

    def test_k_grid_for_oversampling_one(self, centered_grid):
        kg = k_grid_for(centered_grid, 1)
        assert kg.shape == centered_grid.shape

    @pytest.mark.parametrize("kwargs", [dict(oversampling=0), dict(pad_factor=0),
                                        dict(interp="cubic")])
    def test_invalid(self, centered_grid, kwargs):
        with pytest.raises(ValidationError):
            ReconParams(grid=centered_grid, **kwargs)
