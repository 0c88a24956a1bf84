"""Domain types and unit conventions shared by the whole pipeline.

Units are fixed throughout: lengths in mm, time in us, temporal angular
frequency in rad/us, spatial angular frequency in rad/mm.  All arrays are
float64 (complex128 for spectra).  Every type validates its invariants on
construction and is immutable afterwards, so instances are safe to share
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class ValidationError(ValueError):
    """An invariant of a domain type or operation precondition is violated."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class GridSpec:
    """Uniform Cartesian grid in 2 or 3 dimensions.

    ``origin`` is the physical coordinate of index (0, ..., 0).  Sample i
    along axis d sits at ``origin[d] + i * spacing[d]``.
    """

    dim: int
    shape: tuple[int, ...]
    spacing: tuple[float, ...]
    origin: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(n) for n in self.shape))
        object.__setattr__(self, "spacing", tuple(float(s) for s in self.spacing))
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        if self.dim not in (2, 3):
            raise ValidationError(f"grid dim must be 2 or 3, got {self.dim}")
        if not (len(self.shape) == len(self.spacing) == len(self.origin) == self.dim):
            raise ValidationError("shape/spacing/origin lengths must equal dim")
        if any(n < 1 for n in self.shape):
            raise ValidationError(f"all axis counts must be >= 1, got {self.shape}")
        if any(s <= 0 for s in self.spacing):
            raise ValidationError(f"all spacings must be > 0, got {self.spacing}")

    @classmethod
    def centered(cls, shape, spacing) -> "GridSpec":
        """Grid whose index n//2 lies at the physical origin on each axis."""
        shape = tuple(int(n) for n in np.atleast_1d(shape))
        spacing = tuple(float(s) for s in np.atleast_1d(spacing))
        if len(spacing) == 1:
            spacing = spacing * len(shape)
        origin = tuple(-(n // 2) * s for n, s in zip(shape, spacing))
        return cls(dim=len(shape), shape=shape, spacing=spacing, origin=origin)

    @property
    def n_points(self) -> int:
        return int(np.prod(self.shape))

    def axis(self, d: int) -> np.ndarray:
        """Physical coordinates of the samples along axis d."""
        return self.origin[d] + self.spacing[d] * np.arange(self.shape[d])

    def axes(self) -> list[np.ndarray]:
        return [self.axis(d) for d in range(self.dim)]

    def meshgrid(self) -> list[np.ndarray]:
        return list(np.meshgrid(*self.axes(), indexing="ij"))

    def max_radius(self) -> float:
        """Largest |r| over the grid corners."""
        corners = []
        for d in range(self.dim):
            ax = self.axis(d)
            corners.append(max(abs(ax[0]), abs(ax[-1])))
        return float(np.linalg.norm(corners))


@dataclass(frozen=True)
class ObjectField:
    """Real scalar field (absorbed energy density, arbitrary units) on a grid."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise ValidationError(
                f"value shape {v.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("object field contains non-finite values")
        object.__setattr__(self, "values", _readonly(v))


@dataclass(frozen=True)
class Spectrum:
    """Complex field on a centered k-grid (spacing in rad/mm).

    The grid origin is the most negative frequency corner; the DC bin sits
    at index ``shape[d] // 2`` on each axis.
    """

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != self.grid.shape:
            raise ValidationError(
                f"value shape {v.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("spectrum contains non-finite values")
        object.__setattr__(self, "values", _readonly(v))

    @property
    def dc_index(self) -> tuple[int, ...]:
        return tuple(n // 2 for n in self.grid.shape)

    def hermitian_asymmetry(self) -> float:
        """max |V(k) - conj(V(-k))| relative to max |V|; 0 for a real image."""
        v = self.values
        vr = conjugate_reverse(v)
        denom = np.abs(v).max()
        if denom == 0:
            return 0.0
        return float(np.abs(v - vr).max() / denom)


def conjugate_reverse(values: np.ndarray) -> np.ndarray:
    """conj(V(-k)) for values on a centered grid (index pairing (M - m) % M)."""
    axes = tuple(range(values.ndim))
    return np.conj(np.roll(np.flip(values, axis=axes), 1, axis=axes))


@dataclass(frozen=True)
class SensorGeometry:
    """Point sensors on a circle (2D) or sphere (3D) of radius ``radius``.

    ``weights`` are quadrature weights for the surface integral over the
    measurement aperture: mm in 2D, mm^2 in 3D.
    """

    dim: int
    radius: float
    positions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        wts = np.asarray(self.weights, dtype=np.float64)
        if self.dim not in (2, 3):
            raise ValidationError(f"sensor dim must be 2 or 3, got {self.dim}")
        if self.radius <= 0:
            raise ValidationError("sensor radius must be > 0")
        if pos.ndim != 2 or pos.shape[1] != self.dim:
            raise ValidationError(f"positions must have shape (Ns, {self.dim})")
        if wts.shape != (pos.shape[0],):
            raise ValidationError("weights must have one entry per sensor")
        r = np.linalg.norm(pos, axis=1)
        if np.abs(r - self.radius).max() > 1e-9 * self.radius:
            raise ValidationError("all sensors must lie on the measurement surface")
        if np.any(wts <= 0):
            raise ValidationError("weights must be positive")
        target = 2 * np.pi * self.radius if self.dim == 2 else 4 * np.pi * self.radius**2
        if abs(wts.sum() - target) > 1e-9 * target:
            raise ValidationError(
                f"weights must sum to the aperture measure {target}, got {wts.sum()}"
            )
        object.__setattr__(self, "positions", _readonly(pos))
        object.__setattr__(self, "weights", _readonly(wts))

    @property
    def n_sensors(self) -> int:
        return self.positions.shape[0]


def ring_geometry(n_sensors: int, radius: float) -> SensorGeometry:
    """N sensors uniformly spaced on a circle, equal weights 2*pi*R/N."""
    if n_sensors < 1:
        raise ValidationError("need at least one sensor")
    phi = 2 * np.pi * np.arange(n_sensors) / n_sensors
    pos = radius * np.stack([np.cos(phi), np.sin(phi)], axis=1)
    # renormalize |r_s| exactly onto the circle against cos/sin rounding
    pos *= (radius / np.linalg.norm(pos, axis=1))[:, None]
    w = np.full(n_sensors, 2 * np.pi * radius / n_sensors)
    return SensorGeometry(dim=2, radius=radius, positions=pos, weights=w)


def fibonacci_sphere_geometry(n_sensors: int, radius: float) -> SensorGeometry:
    """N sensors on a golden-angle (Fibonacci) lattice, equal weights 4*pi*R^2/N."""
    if n_sensors < 1:
        raise ValidationError("need at least one sensor")
    i = np.arange(n_sensors)
    z = 1.0 - 2.0 * (i + 0.5) / n_sensors
    golden = (1 + np.sqrt(5.0)) / 2
    phi = 2 * np.pi * i / golden
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pos = radius * np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)
    pos *= (radius / np.linalg.norm(pos, axis=1))[:, None]
    w = np.full(n_sensors, 4 * np.pi * radius**2 / n_sensors)
    return SensorGeometry(dim=3, radius=radius, positions=pos, weights=w)


@dataclass(frozen=True)
class PressureSeries:
    """Ns x Nt pressure samples, t = 0 at the first sample, step dt (us)."""

    geometry: SensorGeometry
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if self.dt <= 0:
            raise ValidationError("dt must be > 0")
        if s.ndim != 2 or s.shape[0] != self.geometry.n_sensors:
            raise ValidationError(
                f"samples must have shape (Ns={self.geometry.n_sensors}, Nt)"
            )
        if not np.all(np.isfinite(s)):
            raise ValidationError("pressure samples contain non-finite values")
        object.__setattr__(self, "samples", _readonly(s))

    @property
    def nt(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.nt)


@dataclass(frozen=True)
class AcousticConstants:
    """Speed of sound c (mm/us) and the thermoacoustic ratio beta/Cp.

    ``beta`` and ``cp`` may be given individually; when both are present
    their ratio must agree with ``beta_over_cp``.
    """

    c: float
    beta_over_cp: float
    beta: Optional[float] = None
    cp: Optional[float] = None

    def __post_init__(self):
        if self.c <= 0:
            raise ValidationError("speed of sound must be > 0")
        if self.beta_over_cp <= 0:
            raise ValidationError("beta/Cp must be > 0")
        if self.beta is not None and self.cp is not None:
            if abs(self.beta / self.cp - self.beta_over_cp) > 1e-12 * self.beta_over_cp:
                raise ValidationError("beta/cp inconsistent with beta_over_cp")

    @property
    def grueneisen_pressure(self) -> float:
        """Initial pressure per unit object amplitude: (beta c^2 / Cp)."""
        return self.beta_over_cp * self.c**2


@dataclass(frozen=True)
class ReconParams:
    """Reconstruction configuration.

    The k-grid has ``oversampling * shape`` points per axis with spacing
    dk = 2*pi / (oversampling * N * dx), so the conjugate spatial domain is
    ``oversampling`` times wider than the output grid.  Frequencies whose
    required temporal frequency c|k| exceeds the data Nyquist rate are
    truncated to zero (the only supported band-limit policy).
    """

    grid: GridSpec
    oversampling: int = 2
    pad_factor: int = 8
    interp: str = "nearest"
    band_limit_policy: str = field(default="truncate", init=False)

    def __post_init__(self):
        if self.oversampling < 1:
            raise ValidationError("oversampling must be >= 1")
        if self.pad_factor < 1:
            raise ValidationError("pad_factor must be >= 1")
        if self.interp not in ("nearest", "linear"):
            raise ValidationError("interp must be 'nearest' or 'linear'")

    def k_grid(self) -> GridSpec:
        return k_grid_for(self.grid, self.oversampling)


def k_grid_for(recon_grid: GridSpec, oversampling: int) -> GridSpec:
    """Centered k-grid conjugate to ``recon_grid`` oversampled per axis."""
    shape = tuple(oversampling * n for n in recon_grid.shape)
    spacing = tuple(
        2 * np.pi / (m * dx) for m, dx in zip(shape, recon_grid.spacing)
    )
    origin = tuple(-(m // 2) * dk for m, dk in zip(shape, spacing))
    return GridSpec(dim=recon_grid.dim, shape=shape, spacing=spacing, origin=origin)
