"""Self-describing binary container for fields, spectra and pressure data.

Layout (all integers little-endian):

    bytes 0..3    magic  b"PACT"
    byte  4       format version (currently 1)
    bytes 5..12   uint64 length of the JSON metadata block
    ...           UTF-8 JSON metadata
    ...           raw IEEE-754 float64 payload, little-endian; complex
                  values are stored as interleaved (re, im) pairs

The metadata carries kind, dim, shape, spacing, origin, dt, geometry,
units and dtype, enough to reconstruct the payload exactly.  Round trips
are bit-exact.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Union

import numpy as np

from .core import (
    GridSpec,
    ObjectField,
    PressureSeries,
    SensorGeometry,
    Spectrum,
)

MAGIC = b"PACT"
VERSION = 1

Payload = Union[ObjectField, Spectrum, PressureSeries]


class ContainerError(Exception):
    """Base class for container format errors."""


class BadMagicError(ContainerError):
    pass


class UnsupportedVersionError(ContainerError):
    pass


class MetadataError(ContainerError):
    pass


class TruncatedFileError(ContainerError):
    """File ends before the declared payload is complete."""


class SizeMismatchError(ContainerError):
    """Declared metadata and actual payload size disagree."""


def _metadata_for(payload: Payload) -> dict:
    if isinstance(payload, ObjectField):
        g = payload.grid
        return {
            "kind": "object_field",
            "dim": g.dim,
            "shape": list(g.shape),
            "spacing": list(g.spacing),
            "origin": list(g.origin),
            "dtype": "float64",
            "units": {"spacing": "mm", "values": "arbitrary"},
        }
    if isinstance(payload, Spectrum):
        g = payload.grid
        return {
            "kind": "spectrum",
            "dim": g.dim,
            "shape": list(g.shape),
            "spacing": list(g.spacing),
            "origin": list(g.origin),
            "dtype": "complex128",
            "units": {"spacing": "rad/mm", "values": "arbitrary"},
        }
    if isinstance(payload, PressureSeries):
        geo = payload.geometry
        return {
            "kind": "pressure_series",
            "dim": geo.dim,
            "shape": [geo.n_sensors, payload.nt],
            "dt": payload.dt,
            "dtype": "float64",
            "units": {"dt": "us", "positions": "mm", "values": "arbitrary"},
            "geometry": {
                "dim": geo.dim,
                "radius": geo.radius,
                "positions": geo.positions.tolist(),
                "weights": geo.weights.tolist(),
            },
        }
    raise TypeError(f"unsupported payload type {type(payload).__name__}")


def write_container(path, payload: Payload) -> None:
    """Write a validated payload to ``path``.

    Payload invariants were checked at construction; this only performs
    the serialization.  Raises OSError with the path on I/O failure.
    """
    meta = json.dumps(_metadata_for(payload), sort_keys=True).encode("utf-8")
    if isinstance(payload, Spectrum):
        data = payload.values.astype("<c16").tobytes()
    else:
        data = payload.values.astype("<f8").tobytes() if isinstance(
            payload, ObjectField
        ) else payload.samples.astype("<f8").tobytes()
    with open(Path(path), "wb") as f:
        f.write(MAGIC)
        f.write(bytes([VERSION]))
        f.write(struct.pack("<Q", len(meta)))
        f.write(meta)
        f.write(data)


def read_container(path) -> Payload:
    """Read and validate a payload written by :func:`write_container`."""
    with open(Path(path), "rb") as f:
        blob = f.read()
    if len(blob) < 13:
        raise TruncatedFileError(f"{path}: file shorter than the fixed header")
    if blob[:4] != MAGIC:
        raise BadMagicError(f"{path}: bad magic {blob[:4]!r}")
    if blob[4] != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {blob[4]}")
    (meta_len,) = struct.unpack("<Q", blob[5:13])
    if len(blob) < 13 + meta_len:
        raise TruncatedFileError(f"{path}: metadata block truncated")
    try:
        meta = json.loads(blob[13 : 13 + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MetadataError(f"{path}: invalid metadata: {e}") from e
    body = blob[13 + meta_len :]

    kind = meta.get("kind")
    try:
        if kind == "object_field":
            grid = _grid_from(meta)
            values = _payload_array(body, "<f8", meta["shape"], path)
            return ObjectField(grid=grid, values=values.reshape(meta["shape"]))
        if kind == "spectrum":
            grid = _grid_from(meta)
            values = _payload_array(body, "<c16", meta["shape"], path)
            return Spectrum(grid=grid, values=values.reshape(meta["shape"]))
        if kind == "pressure_series":
            gm = meta["geometry"]
            geo = SensorGeometry(
                dim=int(gm["dim"]),
                radius=float(gm["radius"]),
                positions=np.asarray(gm["positions"], dtype=np.float64),
                weights=np.asarray(gm["weights"], dtype=np.float64),
            )
            samples = _payload_array(body, "<f8", meta["shape"], path)
            return PressureSeries(
                geometry=geo, dt=float(meta["dt"]),
                samples=samples.reshape(meta["shape"]),
            )
    except KeyError as e:
        raise MetadataError(f"{path}: missing metadata field {e}") from e
    raise MetadataError(f"{path}: unknown payload kind {kind!r}")


def _grid_from(meta: dict) -> GridSpec:
    return GridSpec(
        dim=int(meta["dim"]),
        shape=tuple(meta["shape"]),
        spacing=tuple(meta["spacing"]),
        origin=tuple(meta["origin"]),
    )


def _payload_array(body: bytes, dtype: str, shape, path) -> np.ndarray:
    expected = int(np.prod(shape)) * np.dtype(dtype).itemsize
    if len(body) < expected:
        raise TruncatedFileError(
            f"{path}: payload truncated ({len(body)} of {expected} bytes)"
        )
    if len(body) > expected:
        raise SizeMismatchError(
            f"{path}: payload has {len(body)} bytes, metadata declares {expected}"
        )
    return np.frombuffer(body, dtype=dtype).astype(dtype[1:])
