"""Image and coefficient file formats.

Images are binary PGM (P5, 8 or 16 bit) mapped to ``[0, 1]``, or raw
little-endian float64 with a JSON sidecar ``{"n": N}``. Coefficient files are
packed little-endian records with a JSON sidecar holding the effective
configuration and the format version.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .lattice import Coefficients

FORMAT_VERSION = "gaborshear-coeffs/1"
IMAGE_FORMAT_VERSION = "gaborshear-image/1"

GROUP_RECORD = np.dtype(
    [("kind", "u1"), ("j", "<i4"), ("ell", "u1"), ("k", "<i4"), ("m1", "<i4"), ("m2", "<i4"), ("re", "<f8"), ("im", "<f8")]
)
CONE_RECORD = np.dtype(
    [
        ("kind", "u1"),
        ("orientation", "u1"),
        ("j", "<i4"),
        ("ell", "u1"),
        ("k", "<i4"),
        ("m1", "<i4"),
        ("m2", "<i4"),
        ("re", "<f8"),
        ("im", "<f8"),
    ]
)


class FormatError(ValueError):
    """Raised for malformed input files."""


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_json(path: str | Path, payload: dict[str, Any]) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> dict[str, Any]:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# Images.


def _pgm_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    """Read ``count`` whitespace-separated header integers, skipping comments."""
    tokens, pos = [], 2
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and data[pos : pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise FormatError("malformed PGM header")
        tokens.append(int(data[start:pos]))
    # A single whitespace byte separates the header from the raster.
    return tokens, pos + 1


def read_pgm(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:2] != b"P5":
        raise FormatError(f"{path}: not a binary PGM (P5) file")
    (width, height, maxval), start = _pgm_tokens(data, 3)
    if not 0 < maxval < 65536:
        raise FormatError(f"{path}: invalid maxval {maxval}")
    dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
    if len(data) - start < width * height * dtype.itemsize:
        raise FormatError(f"{path}: truncated raster")
    raster = np.frombuffer(data, dtype=dtype, count=width * height, offset=start)
    return raster.reshape(height, width).astype(float) / maxval


def write_pgm(path: str | Path, image: np.ndarray, bits: int = 8) -> None:
    """Write values in ``[0, 1]`` (clipped) as an 8- or 16-bit PGM."""
    if bits not in (8, 16):
        raise FormatError("bits must be 8 or 16")
    maxval = 255 if bits == 8 else 65535
    q = np.rint(np.clip(np.asarray(image, dtype=float), 0.0, 1.0) * maxval)
    raster = q.astype("u1" if bits == 8 else ">u2")
    h, w = raster.shape
    Path(path).write_bytes(f"P5\n{w} {h}\n{maxval}\n".encode() + raster.tobytes())


def read_raw(path: str | Path) -> np.ndarray:
    meta = read_json(sidecar_path(path))
    if "n" not in meta:
        raise FormatError(f"{sidecar_path(path)}: missing key 'n'")
    n = int(meta["n"])
    values = np.fromfile(path, dtype="<f8")
    if values.size != n * n:
        raise FormatError(f"{path}: expected {n * n} float64 values, found {values.size}")
    return values.reshape(n, n)


def write_raw(path: str | Path, image: np.ndarray) -> None:
    image = np.ascontiguousarray(image, dtype="<f8")
    image.tofile(path)
    write_json(sidecar_path(path), {"n": int(image.shape[0]), "format": IMAGE_FORMAT_VERSION})


def read_image(path: str | Path) -> np.ndarray:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"P5":
        return read_pgm(path)
    if sidecar_path(path).exists():
        return read_raw(path)
    raise FormatError(f"{path}: neither a P5 PGM nor raw float64 with a sidecar")


# Coefficients.


def coefficient_records(coeffs: Coefficients, system: str, nonzero_only: bool = False) -> np.ndarray:
    table = coeffs.index_table()
    values = coeffs.flat()
    if nonzero_only:
        keep = values != 0
        table, values = table[keep], values[keep]
    dtype = CONE_RECORD if system == "cone" else GROUP_RECORD
    rec = np.empty(len(values), dtype=dtype)
    rec["kind"] = table[:, 0]
    if system == "cone":
        rec["orientation"] = table[:, 1]
    rec["j"], rec["ell"], rec["k"] = table[:, 2], table[:, 3], table[:, 4]
    rec["m1"], rec["m2"] = table[:, 5], table[:, 6]
    rec["re"], rec["im"] = values.real, values.imag
    return rec


def write_coefficients(
    path: str | Path, coeffs: Coefficients, system: str, config: dict[str, Any], nonzero_only: bool = False
) -> None:
    rec = coefficient_records(coeffs, system, nonzero_only)
    rec.tofile(path)
    fields = list(rec.dtype.names)
    write_json(
        sidecar_path(path),
        {
            "format": FORMAT_VERSION,
            "system": system,
            "config": config,
            "count": int(len(rec)),
            "record": {"fields": fields, "itemsize": rec.dtype.itemsize, "byteorder": "little"},
        },
    )


def read_coefficients(path: str | Path) -> tuple[np.ndarray, np.ndarray, dict[str, Any]]:
    """Return the index table ``(kind, orientation, j, ell, k, m1, m2)``, values and the sidecar."""
    meta = read_json(sidecar_path(path))
    if meta.get("format") != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format {meta.get('format')!r}")
    dtype = CONE_RECORD if meta.get("system") == "cone" else GROUP_RECORD
    rec = np.fromfile(path, dtype=dtype)
    if len(rec) != meta.get("count"):
        raise FormatError(f"{path}: expected {meta.get('count')} records, found {len(rec)}")
    orient = rec["orientation"] if "orientation" in rec.dtype.names else np.zeros(len(rec), dtype=int)
    table = np.column_stack(
        [rec["kind"], orient, rec["j"], rec["ell"], rec["k"], rec["m1"], rec["m2"]]
    ).astype(np.int64)
    return table, rec["re"] + 1j * rec["im"], meta


def fill_coefficients(template: Coefficients, table: np.ndarray, values: np.ndarray) -> Coefficients:
    flat = np.zeros(template.size, dtype=complex)
    flat[template.positions(table)] = values
    return template.with_flat(flat)
