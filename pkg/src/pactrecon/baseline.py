"""Time-domain delay-and-sum backprojection baseline.

A conventional interpolating backprojection with derivative-weighted
traces, used as the sanity and performance reference for the benchmark
harness.  It is a qualitative baseline with the classical
Theta(Ns * Npixels) cost, not an exact inversion.
"""

from __future__ import annotations

import numpy as np

from .core import (
    AcousticConstants,
    GridSpec,
    ObjectField,
    PressureSeries,
    ValidationError,
)


def delay_and_sum(
    data: PressureSeries,
    grid: GridSpec,
    consts: AcousticConstants,
) -> ObjectField:
    """Backproject derivative-weighted traces onto ``grid``.

    image(r) = sum_s w_s b_s(|r - r_s| / c), where
    b_s(t) = 2 p(r_s, t) - 2 t dp/dt (central differences) is looked up
    with linear interpolation; lookups beyond the recorded window
    contribute zero.  Sensors are processed in ascending order.
    """
    geom = data.geometry
    if grid.dim != geom.dim:
        raise ValidationError("grid and data dimensions differ")
    t = data.times
    dp = np.gradient(data.samples, data.dt, axis=1)
    b = 2.0 * data.samples - 2.0 * t[None, :] * dp

    mesh = grid.meshgrid()
    img = np.zeros(grid.shape)
    nt = data.nt
    inv_cdt = 1.0 / (consts.c * data.dt)
    for s in range(geom.n_sensors):
        d2 = sum((m - geom.positions[s, ax]) ** 2 for ax, m in enumerate(mesh))
        tau = np.sqrt(d2) * inv_cdt
        i0 = tau.astype(np.int64)
        valid = i0 < nt - 1
        i0s = np.where(valid, i0, 0)
        f = tau - i0s
        vals = (1.0 - f) * b[s, i0s] + f * b[s, i0s + 1]
        img += geom.weights[s] * np.where(valid, vals, 0.0)
    return ObjectField(grid=grid, values=img)
