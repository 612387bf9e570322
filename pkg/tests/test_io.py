import json

import numpy as np
import pytest

from gaborshear.coneshear import ConeParams, ConeSystem
from gaborshear.groupshear import GroupParams, GroupSystem
from gaborshear.io import (
    FormatError,
    fill_coefficients,
    read_coefficients,
    read_image,
    read_json,
    read_pgm,
    sidecar_path,
    write_coefficients,
    write_pgm,
    write_raw,
)


@pytest.mark.parametrize("bits", [8, 16])
def test_pgm_round_trip(tmp_path, bits):
    maxval = 2**bits - 1
    img = np.random.default_rng(bits).integers(0, maxval + 1, (8, 12)) / maxval
    path = tmp_path / "a.pgm"
    write_pgm(path, img, bits)
    np.testing.assert_array_equal(read_image(path), img)


def test_pgm_header_comments(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5\n# comment\n2 1\n255\n\x00\xff")
    np.testing.assert_array_equal(read_pgm(path), [[0.0, 1.0]])


def test_pgm_errors(tmp_path):
    path = tmp_path / "bad.pgm"
    path.write_bytes(b"P2\n2 2\n255\n0 0 0 0")
    with pytest.raises(FormatError):
        read_pgm(path)
    path.write_bytes(b"P5\n4 4\n255\n\x00")
    with pytest.raises(FormatError):
        read_pgm(path)
    with pytest.raises(FormatError):
        write_pgm(path, np.zeros((2, 2)), bits=12)


def test_raw_round_trip(tmp_path):
    img = np.random.default_rng(0).standard_normal((8, 8))
    path = tmp_path / "a.raw"
    write_raw(path, img)
    np.testing.assert_array_equal(read_image(path), img)
    assert read_json(sidecar_path(path))["n"] == 8


def test_raw_errors(tmp_path):
    path = tmp_path / "a.raw"
    write_raw(path, np.zeros((4, 4)))
    sidecar_path(path).write_text(json.dumps({"n": 5}))
    with pytest.raises(FormatError, match="expected 25"):
        read_image(path)
    sidecar_path(path).write_text("{bad")
    with pytest.raises(FormatError, match="line 1"):
        read_image(path)
    other = tmp_path / "b.bin"
    other.write_bytes(b"\x00" * 8)
    with pytest.raises(FormatError):
        read_image(other)


@pytest.mark.parametrize("kind", ["cone", "group"])
def test_coefficient_round_trip(tmp_path, kind):
    system = ConeSystem(ConeParams(), 32) if kind == "cone" else GroupSystem(GroupParams(), 32)
    img = np.random.default_rng(1).standard_normal((32, 32))
    coeffs = system.analyze(img)
    path = tmp_path / "c.bin"
    write_coefficients(path, coeffs, kind, {"N": 32})
    table, values, meta = read_coefficients(path)
    assert meta["config"] == {"N": 32} and meta["count"] == coeffs.size
    again = fill_coefficients(system.template(), table, values)
    np.testing.assert_array_equal(again.flat(), coeffs.flat())


def test_nonzero_only_and_fill(tmp_path):
    system = GroupSystem(GroupParams(), 32)
    template = system.template()
    flat = np.zeros(template.size, dtype=complex)
    flat[[3, 50]] = [1 + 2j, -4.0]
    path = tmp_path / "c.bin"
    write_coefficients(path, template.with_flat(flat), "group", {}, nonzero_only=True)
    table, values, _ = read_coefficients(path)
    assert len(values) == 2
    np.testing.assert_array_equal(fill_coefficients(template, table, values).flat(), flat)


def test_coefficient_format_errors(tmp_path):
    system = GroupSystem(GroupParams(), 32)
    path = tmp_path / "c.bin"
    write_coefficients(path, system.template(), "group", {})
    meta = read_json(sidecar_path(path))
    meta["count"] += 1
    sidecar_path(path).write_text(json.dumps(meta))
    with pytest.raises(FormatError, match="records"):
        read_coefficients(path)
    meta["format"] = "other/9"
    sidecar_path(path).write_text(json.dumps(meta))
    with pytest.raises(FormatError, match="unsupported"):
        read_coefficients(path)
