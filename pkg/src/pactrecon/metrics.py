"""Image comparison metrics and delimited/PGM exports."""

from __future__ import annotations

import csv

import numpy as np

from .core import GridSpec, ObjectField, ValidationError


def nrmse(a: ObjectField, b: ObjectField, roi=None) -> float:
    """Root-mean-square error of a against reference b, normalized by max|b|.

    ``roi`` is an optional box ((lo, hi) per axis, mm); default is the
    full grid.  Grids of both fields must be identical.
    """
    _check_same_grid(a, b)
    av, bv = a.values, b.values
    if roi is not None:
        sel = _roi_slices(a.grid, roi)
        av, bv = av[sel], bv[sel]
    peak = np.abs(bv).max()
    if peak == 0:
        raise ValidationError("reference is identically zero on the roi")
    return float(np.sqrt(np.mean((av - bv) ** 2)) / peak)


def _check_same_grid(a: ObjectField, b: ObjectField) -> None:
    ga, gb = a.grid, b.grid
    if ga.shape != gb.shape or ga.dim != gb.dim:
        raise ValidationError("fields live on different grids")
    if any(abs(x - y) > 1e-9 for x, y in zip(ga.spacing, gb.spacing)):
        raise ValidationError("fields live on different grids")
    if any(abs(x - y) > 1e-9 for x, y in zip(ga.origin, gb.origin)):
        raise ValidationError("fields live on different grids")


def _roi_slices(grid: GridSpec, roi):
    if len(roi) != grid.dim:
        raise ValidationError(f"roi must have {grid.dim} (lo, hi) pairs")
    out = []
    for d, (lo, hi) in enumerate(roi):
        ax = grid.axis(d)
        idx = np.nonzero((ax >= lo) & (ax <= hi))[0]
        if idx.size == 0:
            raise ValidationError(f"roi empty along axis {d}")
        out.append(slice(idx[0], idx[-1] + 1))
    return tuple(out)


def central_profile(img: ObjectField, axis: int = 0):
    """The 1D line through the grid center index along ``axis``.

    Returns (coords, values): physical coordinates along the axis and the
    field values on the central row/column (center index shape//2 on all
    other axes).
    """
    g = img.grid
    if not 0 <= axis < g.dim:
        raise ValidationError(f"axis must be in [0, {g.dim})")
    sel = tuple(
        slice(None) if d == axis else g.shape[d] // 2 for d in range(g.dim)
    )
    return g.axis(axis), np.asarray(img.values[sel])


def write_profile_csv(path, coords: np.ndarray, values: np.ndarray, label: str = "value") -> None:
    """Profile as two-column CSV: coordinate (mm), value."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["coordinate_mm", label])
        for x, v in zip(coords, values):
            writer.writerow([f"{x:.9g}", f"{v:.17g}"])


def export_pgm(field: ObjectField, path, window=(-0.2, 1.2)) -> None:
    """16-bit binary PGM with the greyscale window mapped to [0, 65535].

    Values are clipped to the window.  2D fields only; the first grid
    axis maps to image rows.
    """
    if field.grid.dim != 2:
        raise ValidationError("PGM export is 2D only")
    lo, hi = float(window[0]), float(window[1])
    if hi <= lo:
        raise ValidationError("window must satisfy lo < hi")
    scaled = np.clip((field.values - lo) / (hi - lo), 0.0, 1.0)
    pix = np.rint(scaled * 65535).astype(">u2")
    with open(path, "wb") as f:
        f.write(f"P5\n{pix.shape[1]} {pix.shape[0]}\n65535\n".encode("ascii"))
        f.write(pix.tobytes())
