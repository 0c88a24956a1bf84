"""Matplotlib figure rendering for the CLI report paths.

All functions write image files next to the delimited outputs; nothing is
shown interactively (Agg backend).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core import ObjectField, ValidationError


def save_image_figure(field: ObjectField, path, window=None, title=None) -> None:
    """Greyscale rendering of a 2D field with physical axes (mm)."""
    if field.grid.dim != 2:
        raise ValidationError("image figures are 2D only")
    g = field.grid
    extent = [
        g.origin[1] - g.spacing[1] / 2,
        g.origin[1] + (g.shape[1] - 0.5) * g.spacing[1],
        g.origin[0] + (g.shape[0] - 0.5) * g.spacing[0],
        g.origin[0] - g.spacing[0] / 2,
    ]
    vmin, vmax = (window if window is not None else (None, None))
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    im = ax.imshow(field.values, cmap="gray", vmin=vmin, vmax=vmax, extent=extent)
    ax.set_xlabel("y (mm)")
    ax.set_ylabel("x (mm)")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_profile_figure(series, path, xlabel="position (mm)", ylabel="amplitude") -> None:
    """Overlay plot of (label, coords, values) profile triples."""
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for label, coords, values in series:
        ax.plot(coords, values, label=label, linewidth=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(list(series)) > 1:
        ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bench_figure(rows, path) -> None:
    """Log-log stage timings vs image size from benchmark rows.

    ``rows`` are dicts with keys stage, n, sensors, seconds.
    """
    stages = sorted({r["stage"] for r in rows})
    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    for stage in stages:
        pts = sorted((r["n"], r["seconds"]) for r in rows if r["stage"] == stage)
        ns = [p[0] for p in pts]
        ts = [p[1] for p in pts]
        ax.loglog(ns, ts, "o-", label=stage)
    ax.set_xlabel("image size N")
    ax.set_ylabel("seconds")
    ax.legend(frameon=False, fontsize=8)
    ax.grid(which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
