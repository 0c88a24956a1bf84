"""Fourier-domain reconstruction for photoacoustic computed tomography
with circular (2D) and spherical (3D) measurement geometries.
"""

from .core import (
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
from .container import read_container, write_container
from .phantom import (
    Disk,
    DiskPhantomSpec,
    GaussianPhantomSpec,
    default_disk_phantom_spec,
    downsample_mean,
    gaussian_spectrum,
    make_disk_phantom,
    make_gaussian_phantom,
)
from .forward import (
    DiskSource,
    GaussianSource,
    TimeAxis,
    add_noise,
    analytic_sphere_forward,
    ball_spectrum,
    quadrature_forward,
    sources_from_disk_phantom,
    spectral_forward,
)
from .recon import (
    ReconReport,
    SensorSpectrum,
    accumulate_spectrum,
    band_truncation_mask,
    invert_spectrum,
    modified_data_spectrum,
    reconstruct,
    sample_at_ck,
)
from .baseline import delay_and_sum
from .metrics import central_profile, export_pgm, nrmse

__version__ = "0.1.0"

__all__ = [
    "AcousticConstants",
    "Disk",
    "DiskPhantomSpec",
    "DiskSource",
    "GaussianPhantomSpec",
    "GaussianSource",
    "GridSpec",
    "ObjectField",
    "PressureSeries",
    "ReconParams",
    "ReconReport",
    "SensorGeometry",
    "SensorSpectrum",
    "Spectrum",
    "TimeAxis",
    "ValidationError",
    "accumulate_spectrum",
    "add_noise",
    "analytic_sphere_forward",
    "ball_spectrum",
    "band_truncation_mask",
    "central_profile",
    "default_disk_phantom_spec",
    "delay_and_sum",
    "downsample_mean",
    "export_pgm",
    "fibonacci_sphere_geometry",
    "gaussian_spectrum",
    "invert_spectrum",
    "k_grid_for",
    "make_disk_phantom",
    "make_gaussian_phantom",
    "modified_data_spectrum",
    "nrmse",
    "quadrature_forward",
    "read_container",
    "reconstruct",
    "ring_geometry",
    "sample_at_ck",
    "sources_from_disk_phantom",
    "spectral_forward",
    "write_container",
]
