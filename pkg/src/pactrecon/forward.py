"""Forward models: simulated pressure data from an object.

Three routes, all evaluating the same continuous imaging model

    p(r_s, t) = (beta c^2 / Cp) (2 pi)^-d  integral dk  A_hat(k) cos(c|k|t) e^{i k.r_s}

* :func:`spectral_forward` discretizes A_hat by the DFT of a gridded
  object and sums over the object's own k-grid.  Exact plane-wave factors,
  O(Nk * Ns * Nt) cost: intended for desk-scale grids as a test fixture.
  Because the k-grid is discrete the wavefield is periodic with the grid
  extent; traces are only physical for t below the wrap-around time
  (L - R_S - support) / c.
* :func:`quadrature_forward` uses closed-form source spectra and reduces
  the angular integral analytically, leaving a 1D radial quadrature.  This
  is the high-accuracy free-space reference (no grid, no wrap-around).
* :func:`analytic_sphere_forward` is the classical closed-form trace of a
  uniformly pressurized sphere (3D), optionally Gaussian-mollified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf, j0, j1

from .core import (
    AcousticConstants,
    ObjectField,
    PressureSeries,
    SensorGeometry,
    ValidationError,
)
from .phantom import FWHM_TO_SIGMA, DiskPhantomSpec

# voxels with |value| <= SUPPORT_EPS * max|value| count as empty when
# checking that the object lies inside the measurement surface
SUPPORT_EPS = 1e-12

_K_BLOCK = 16384  # k-points per block in spectral_forward (memory bound)


@dataclass(frozen=True)
class TimeAxis:
    """Uniform time samples t_j = j * dt, j = 0..nt-1."""

    dt: float
    nt: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ValidationError("dt must be > 0")
        if self.nt < 2:
            raise ValidationError("nt must be >= 2")

    @property
    def values(self) -> np.ndarray:
        return self.dt * np.arange(self.nt)


def _support_radius(obj: ObjectField) -> float:
    v = np.abs(obj.values)
    vmax = v.max()
    if vmax == 0:
        return 0.0
    mask = v > SUPPORT_EPS * vmax
    mesh = obj.grid.meshgrid()
    r2 = sum(m**2 for m in mesh)
    return float(np.sqrt(r2[mask].max()))


def _object_spectrum_flat(obj: ObjectField):
    """A_hat on the object's own FFT k-grid, flattened.

    Returns (a_hat, kvecs, kmag) where a_hat = dx^d * DFT with the grid
    origin phase applied, so a_hat approximates the continuous transform.
    """
    g = obj.grid
    a_hat = np.fft.fftn(obj.values)
    kaxes = [2 * np.pi * np.fft.fftfreq(n, d) for n, d in zip(g.shape, g.spacing)]
    for ax, (ka, x0) in enumerate(zip(kaxes, g.origin)):
        shape = [1] * g.dim
        shape[ax] = -1
        a_hat = a_hat * np.exp(-1j * ka * x0).reshape(shape)
    a_hat *= np.prod(g.spacing)
    kmesh = np.meshgrid(*kaxes, indexing="ij")
    kvecs = np.stack([km.ravel() for km in kmesh], axis=1)
    return a_hat.ravel(), kvecs, np.linalg.norm(kvecs, axis=1)


def spectral_forward(
    obj: ObjectField,
    geom: SensorGeometry,
    time: TimeAxis,
    consts: AcousticConstants,
) -> PressureSeries:
    """Pressure traces from a gridded object via the spectral imaging model.

    p(r_s, t_j) = Gamma * (2 pi)^-d * sum_k dk^d A_hat(k) cos(c|k|t_j) e^{i k.r_s}
    with A_hat = dx^d * DFT(object) (grid-origin phase applied) and
    Gamma = beta c^2 / Cp.  Deterministic: sensors are processed in
    ascending index order with a fixed k-block order.
    """
    if obj.grid.dim != geom.dim:
        raise ValidationError("object and geometry dimensions differ")
    r_supp = _support_radius(obj)
    if r_supp >= geom.radius:
        raise ValidationError(
            f"object support (radius {r_supp:.3f}) must lie strictly inside "
            f"the measurement surface (radius {geom.radius})"
        )
    return PressureSeries(
        geometry=geom,
        dt=time.dt,
        samples=_spectral_traces(obj, geom, time.values, consts),
    )


def _spectral_traces(obj, geom, times, consts) -> np.ndarray:
    """Evaluate the spectral sum at arbitrary time values (shape (Ns, len(times)))."""
    a_hat, kvecs, kmag = _object_spectrum_flat(obj)
    # a_hat carries dx^d; the Riemann measure adds dk^d/(2 pi)^d = 1/(N dx)^d
    extent = np.prod([n * s for n, s in zip(obj.grid.shape, obj.grid.spacing)])
    scale = consts.grueneisen_pressure / extent
    a_hat = a_hat * scale
    u = consts.c * kmag
    out = np.zeros((geom.n_sensors, len(times)))
    for start in range(0, a_hat.size, _K_BLOCK):
        sl = slice(start, min(start + _K_BLOCK, a_hat.size))
        ctab = np.cos(np.outer(u[sl], times))
        phases = np.exp(1j * (geom.positions @ kvecs[sl].T))  # (Ns, nk)
        out += (phases * a_hat[sl]).real @ ctab
    return out


def analytic_sphere_forward(
    center,
    radius: float,
    amplitude: float,
    geom: SensorGeometry,
    time: TimeAxis,
    consts: AcousticConstants,
    blur_sigma: float = 0.0,
) -> PressureSeries:
    """Closed-form traces of a uniformly pressurized sphere (3D only).

    For a sharp sphere the trace is the classical N-wave
    p(d, t) = p0 (d - c t) / (2 d) for |d - c t| <= a (0 otherwise), with
    d the sensor distance to the sphere center and initial pressure
    p0 = (beta c^2 / Cp) * amplitude.  With ``blur_sigma`` > 0 the sphere
    is mollified by an isotropic Gaussian and the trace is the exact
    closed form for that smoothed object (erf-based), which pairs with a
    gridded rendering of :func:`mollified_ball_profile`.
    """
    if geom.dim != 3:
        raise ValidationError("analytic sphere traces are 3D only")
    center = np.asarray(center, dtype=np.float64)
    if center.shape != (3,):
        raise ValidationError("center must be a 3-vector")
    if radius <= 0:
        raise ValidationError("radius must be > 0")
    if np.linalg.norm(center) + radius + 4 * blur_sigma >= geom.radius:
        raise ValidationError("sphere must lie strictly inside the measurement surface")
    p0 = consts.grueneisen_pressure * amplitude
    d = np.linalg.norm(geom.positions - center, axis=1)[:, None]
    ct = consts.c * time.values[None, :]
    if blur_sigma == 0.0:
        samples = np.where(np.abs(d - ct) <= radius, p0 * (d - ct) / (2 * d), 0.0)
    else:
        plus = (d + ct) * mollified_ball_profile(d + ct, radius, blur_sigma)
        minus = (d - ct) * mollified_ball_profile(np.abs(d - ct), radius, blur_sigma)
        samples = p0 * (plus + minus) / (2 * d)
    return PressureSeries(geometry=geom, dt=time.dt, samples=samples)


def mollified_ball_profile(rho, radius: float, sigma: float) -> np.ndarray:
    """Radial profile of a unit ball convolved with an isotropic Gaussian.

    sigma = 0 returns the indicator.  The closed form follows from the 1D
    reduction of radial 3D convolution.
    """
    rho = np.asarray(rho, dtype=np.float64)
    if sigma == 0.0:
        return (rho <= radius).astype(np.float64)
    s2 = np.sqrt(2.0) * sigma
    rho_safe = np.where(rho == 0, 1e-300, rho)
    gauss = (sigma / (rho_safe * np.sqrt(2 * np.pi))) * (
        np.exp(-((radius + rho) ** 2) / (2 * sigma**2))
        - np.exp(-((radius - rho) ** 2) / (2 * sigma**2))
    )
    bulk = 0.5 * (erf((radius - rho) / s2) + erf((radius + rho) / s2))
    out = bulk + gauss
    # limit rho -> 0: the gauss term vanishes
    return np.where(rho == 0, erf(radius / s2), out)


def ball_spectrum(k_mag, radius: float, amplitude: float, blur_sigma: float = 0.0):
    """Radial Fourier transform of a (possibly mollified) uniform ball."""
    k = np.asarray(k_mag, dtype=np.float64)
    ka = np.where(k == 0, 1.0, k) * radius
    rad = 4 * np.pi * (np.sin(ka) - ka * np.cos(ka)) / np.where(k == 0, 1.0, k) ** 3
    rad = np.where(k == 0, 4 * np.pi * radius**3 / 3, rad)
    if blur_sigma > 0:
        rad = rad * np.exp(-(blur_sigma**2) * k**2 / 2)
    return amplitude * rad


def add_noise(data: PressureSeries, level: float, seed: int) -> PressureSeries:
    """Add i.i.d. Gaussian noise with sigma = level * max|samples|.

    The level is relative to the global peak over the whole dataset.
    Reproducible for a given seed; level 0 returns the input unchanged.
    """
    if level < 0:
        raise ValidationError("noise level must be >= 0")
    if level == 0:
        return data
    rng = np.random.default_rng(seed)
    sigma = level * np.abs(data.samples).max()
    noisy = data.samples + rng.normal(0.0, sigma, data.samples.shape)
    return PressureSeries(geometry=data.geometry, dt=data.dt, samples=noisy)


# ---------------------------------------------------------------------------
# closed-form sources for the radial-quadrature forward model


@dataclass(frozen=True)
class GaussianSource:
    """Isotropic Gaussian object component (valid in 2D and 3D)."""

    center: tuple[float, ...]
    sigma: float
    amplitude: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(x) for x in self.center))
        if self.sigma <= 0:
            raise ValidationError("sigma must be > 0")

    def radial_spectrum(self, k: np.ndarray, dim: int) -> np.ndarray:
        amp = self.amplitude * (2 * np.pi * self.sigma**2) ** (dim / 2.0)
        return amp * np.exp(-self.sigma**2 * k**2 / 2)

    def k_support(self) -> float:
        # exp(-sigma^2 k^2 / 2) below 1e-18
        return 9.1 / self.sigma


@dataclass(frozen=True)
class DiskSource:
    """Gaussian-blurred uniform disk (2D only).

    A strictly positive blur is required: it makes the spectrum decay fast
    enough for the radial quadrature to truncate cleanly.
    """

    center: tuple[float, float]
    radius: float
    amplitude: float
    blur_fwhm: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(x) for x in self.center))
        if self.radius <= 0:
            raise ValidationError("radius must be > 0")
        if self.blur_fwhm <= 0:
            raise ValidationError("disk sources need a positive blur FWHM")

    @property
    def blur_sigma(self) -> float:
        return self.blur_fwhm * FWHM_TO_SIGMA

    def radial_spectrum(self, k: np.ndarray, dim: int) -> np.ndarray:
        if dim != 2:
            raise ValidationError("disk sources are 2D")
        ka = np.where(k == 0, 1.0, k) * self.radius
        airy = np.where(k == 0, 1.0, 2 * j1(ka) / ka)
        return (
            self.amplitude * np.pi * self.radius**2
            * airy * np.exp(-self.blur_sigma**2 * k**2 / 2)
        )

    def k_support(self) -> float:
        return 9.1 / self.blur_sigma


def sources_from_disk_phantom(spec: DiskPhantomSpec) -> list[DiskSource]:
    return [
        DiskSource(center=d.center, radius=d.radius, amplitude=d.amplitude,
                   blur_fwhm=spec.blur_fwhm)
        for d in spec.disks
    ]


def quadrature_forward(
    sources,
    geom: SensorGeometry,
    time: TimeAxis,
    consts: AcousticConstants,
    dk: float | None = None,
    k_max: float | None = None,
) -> PressureSeries:
    """Free-space traces for closed-form sources via 1D radial quadrature.

    The angular k-integral of the spectral model reduces analytically
    (Bessel J0 kernel in 2D, spherical sinc in 3D), leaving

        p(r_s, t) = Gamma/(2 pi)   * int k   S(k) J0(k d_s)       cos(ckt) dk   (2D)
        p(r_s, t) = Gamma/(2 pi^2) * int k^2 S(k) sin(k d_s)/(k d_s) cos(ckt) dk (3D)

    with d_s = |r_s - center| per source.  Midpoint quadrature on
    [0, k_max]; the default dk keeps the quadrature's periodic images
    several times beyond the largest travel distance c*t + d, so the rule
    converges at machine precision for smoothly decaying spectra.
    """
    sources = list(sources)
    if not sources:
        raise ValidationError("need at least one source")
    dim = geom.dim
    t = time.values
    centers = np.array([s.center for s in sources], dtype=np.float64)
    if centers.shape[1] != dim:
        raise ValidationError("source centers must match the geometry dimension")
    if k_max is None:
        k_max = max(s.k_support() for s in sources)
    if dk is None:
        travel = consts.c * t[-1] + geom.radius + np.linalg.norm(centers, axis=1).max()
        dk = 2 * np.pi / (8.0 * travel)
    kq = (np.arange(int(np.ceil(k_max / dk))) + 0.5) * dk
    ctab = np.cos(np.outer(consts.c * kq, t))  # (Nq, Nt), shared
    gamma = consts.grueneisen_pressure
    p = np.zeros((geom.n_sensors, time.nt))
    for src in sources:
        s_k = src.radial_spectrum(kq, dim)
        d = np.linalg.norm(geom.positions - np.asarray(src.center), axis=1)
        if dim == 2:
            kern = j0(np.outer(d, kq)) * (kq * s_k)
            pref = gamma / (2 * np.pi)
        else:
            kd = np.outer(d, kq)
            kern = np.sinc(kd / np.pi) * (kq**2 * s_k)
            pref = gamma / (2 * np.pi**2)
        p += pref * (kern @ ctab) * dk
        if dim == 2:
            # Euler-Maclaurin endpoint term of the midpoint rule: the 2D
            # integrand k S(k) J0 cos has slope S(0) at k = 0
            s0 = float(src.radial_spectrum(np.array([0.0]), dim)[0])
            p -= gamma / (2 * np.pi) * dk**2 / 24.0 * s0
    return PressureSeries(geometry=geom, dt=time.dt, samples=p)
