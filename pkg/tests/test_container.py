import json
import struct

import numpy as np
import numpy.testing as npt
import pytest

from pactrecon import (
    GridSpec,
    ObjectField,
    PressureSeries,
    Spectrum,
    read_container,
    ring_geometry,
    write_container,
)
from pactrecon.container import (
    BadMagicError,
    SizeMismatchError,
    TruncatedFileError,
    UnsupportedVersionError,
)


def test_object_roundtrip_identity(tmp_path):
    grid = GridSpec.centered((4, 4), (0.5, 0.5))
    values = np.arange(16.0).reshape(4, 4)
    path = tmp_path / "o.pact"
    write_container(path, ObjectField(grid=grid, values=values))
    back = read_container(path)
    assert isinstance(back, ObjectField)
    assert np.array_equal(back.values, values)  # bit-exact
    assert back.grid == grid


def test_spectrum_metadata_and_interleaving(tmp_path):
    kg = GridSpec.centered((4, 4), (0.1, 0.1))
    v = np.zeros((4, 4), dtype=complex)
    v[1, 2] = 3.5 - 2.25j
    path = tmp_path / "s.pact"
    write_container(path, Spectrum(grid=kg, values=v))
    blob = path.read_bytes()
    (meta_len,) = struct.unpack("<Q", blob[5:13])
    meta = json.loads(blob[13 : 13 + meta_len])
    assert meta["kind"] == "spectrum"
    # complex stored as interleaved little-endian (re, im) float64 pairs
    body = blob[13 + meta_len :]
    flat_index = 1 * 4 + 2
    re, im = struct.unpack_from("<2d", body, offset=flat_index * 16)
    assert (re, im) == (3.5, -2.25)
    back = read_container(path)
    assert np.array_equal(back.values, v)


def test_pressure_file_size_arithmetic(tmp_path):
    # header is 4 (magic) + 1 (version) + 8 (length) + metadata bytes
    geom = ring_geometry(256, 12.8)
    data = PressureSeries(geometry=geom, dt=1 / 30.0, samples=np.zeros((256, 2048)))
    path = tmp_path / "p.pact"
    write_container(path, data)
    blob = path.read_bytes()
    (meta_len,) = struct.unpack("<Q", blob[5:13])
    assert len(blob) == 13 + meta_len + 256 * 2048 * 8


def test_pressure_roundtrip(tmp_path):
    geom = ring_geometry(5, 2.0)
    rng = np.random.default_rng(1)
    data = PressureSeries(geometry=geom, dt=0.25, samples=rng.standard_normal((5, 12)))
    path = tmp_path / "p.pact"
    write_container(path, data)
    back = read_container(path)
    assert isinstance(back, PressureSeries)
    assert back.dt == data.dt
    assert np.array_equal(back.samples, data.samples)
    assert np.array_equal(back.geometry.positions, geom.positions)
    assert np.array_equal(back.geometry.weights, geom.weights)


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.pact"
    grid = GridSpec.centered((2, 2), (1.0, 1.0))
    write_container(path, ObjectField(grid=grid, values=np.zeros((2, 2))))
    blob = bytearray(path.read_bytes())
    blob[:4] = b"XXXX"
    path.write_bytes(bytes(blob))
    with pytest.raises(BadMagicError):
        read_container(path)


def test_truncated_by_one_byte(tmp_path):
    path = tmp_path / "t.pact"
    grid = GridSpec.centered((2, 2), (1.0, 1.0))
    write_container(path, ObjectField(grid=grid, values=np.ones((2, 2))))
    blob = path.read_bytes()
    path.write_bytes(blob[:-1])
    with pytest.raises(TruncatedFileError):
        read_container(path)


def test_trailing_garbage(tmp_path):
    path = tmp_path / "g.pact"
    grid = GridSpec.centered((2, 2), (1.0, 1.0))
    write_container(path, ObjectField(grid=grid, values=np.ones((2, 2))))
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(SizeMismatchError):
        read_container(path)


def test_unsupported_version(tmp_path):
    path = tmp_path / "v.pact"
    grid = GridSpec.centered((2, 2), (1.0, 1.0))
    write_container(path, ObjectField(grid=grid, values=np.ones((2, 2))))
    blob = bytearray(path.read_bytes())
    blob[4] = 9
    path.write_bytes(bytes(blob))
    with pytest.raises(UnsupportedVersionError):
        read_container(path)


def test_roundtrip_random_payloads(tmp_path):
    # property check over random small payloads of every kind
    rng = np.random.default_rng(7)
    for trial in range(10):
        dim = int(rng.integers(2, 4))
        shape = tuple(int(n) for n in rng.integers(1, 7, size=dim))
        spacing = tuple(float(s) for s in rng.uniform(0.05, 2.0, size=dim))
        origin = tuple(float(o) for o in rng.uniform(-3, 3, size=dim))
        grid = GridSpec(dim=dim, shape=shape, spacing=spacing, origin=origin)

        obj = ObjectField(grid=grid, values=rng.standard_normal(shape))
        spec = Spectrum(
            grid=grid,
            values=rng.standard_normal(shape) + 1j * rng.standard_normal(shape),
        )
        ns, nt = int(rng.integers(1, 9)), int(rng.integers(2, 20))
        geom = (
            ring_geometry(ns, float(rng.uniform(1, 10)))
            if dim == 2
            else __import__("pactrecon").fibonacci_sphere_geometry(
                ns, float(rng.uniform(1, 10))
            )
        )
        pres = PressureSeries(
            geometry=geom, dt=float(rng.uniform(0.01, 1.0)),
            samples=rng.standard_normal((ns, nt)),
        )
        for i, payload in enumerate((obj, spec, pres)):
            path = tmp_path / f"r{trial}_{i}.pact"
            write_container(path, payload)
            back = read_container(path)
            if isinstance(payload, PressureSeries):
                assert np.array_equal(back.samples, payload.samples)
                assert back.dt == payload.dt
            else:
                assert np.array_equal(back.values, payload.values)
                assert back.grid == payload.grid
