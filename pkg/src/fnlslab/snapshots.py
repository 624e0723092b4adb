"""Bit-exact serialization of fields and diagnostic series.

Snapshot binary layout (all little-endian, header 96 bytes, offsets fixed):

    offset  size  field
    0       8     magic   b"FNLSNAP1"
    8       4     u32     format version (currently 1)
    12      4     u32     flags (bit 0: ground-state metadata valid)
    16      8     u64     N, number of samples
    24      8     f64     D, domain half-width scale
    32      8     f64     t, sample time
    40      8     f64     s
    48      8     f64     p
    56      8     f64     gamma
    64      8     f64     eps
    72      8     f64     omega
    80      8     f64     residual_norm
    88      4     u32     CRC-32 of the payload
    92      4     u32     reserved, zero
    96      16*N        payload: (re, im) float64 pairs per sample

Series CSV files carry one row per recorded sample with 17 significant
digits, which round-trips 64-bit floats exactly.
"""

from __future__ import annotations

import io
import os
import struct
import tempfile
import zlib
from dataclasses import dataclass

import numpy as np

from .grids import Grid, PhysicalField

MAGIC = b"FNLSNAP1"
VERSION = 1
FLAG_GROUND_STATE = 1
_HEADER_FMT = "<8sIIQddddddddII"
HEADER_SIZE = struct.calcsize(_HEADER_FMT)

SERIES_HEADER = "t,mass,energy,delta_E,sup_norm,grad_l2,hdot_sigma,delta_sing,mu"
_SERIES_FIELDS = tuple(SERIES_HEADER.split(","))


class SnapshotFormatError(ValueError):
    """Corrupt, truncated, or incompatible snapshot data."""


@dataclass(frozen=True)
class SnapshotHeader:
    """Metadata stored in front of a serialized field."""

    n_modes: int
    half_width: float
    t: float
    s: float
    p: float
    gamma: float
    eps: float
    omega: float = float("nan")
    residual_norm: float = float("nan")
    is_ground_state: bool = False
    version: int = VERSION


def snapshot_to_bytes(field: PhysicalField, header: SnapshotHeader) -> bytes:
    """Serialize a field with its header; read(write(x)) is bit-exact."""
    if header.n_modes != field.grid.n_modes:
        raise SnapshotFormatError(
            f"header N={header.n_modes} does not match field length "
            f"{field.grid.n_modes}"
        )
    payload = np.ascontiguousarray(field.values, dtype="<c16").tobytes()
    flags = FLAG_GROUND_STATE if header.is_ground_state else 0
    packed = struct.pack(
        _HEADER_FMT,
        MAGIC,
        header.version,
        flags,
        header.n_modes,
        header.half_width,
        header.t,
        header.s,
        header.p,
        header.gamma,
        header.eps,
        header.omega,
        header.residual_norm,
        zlib.crc32(payload) & 0xFFFFFFFF,
        0,
    )
    return packed + payload


def snapshot_from_bytes(data: bytes) -> tuple[PhysicalField, SnapshotHeader]:
    """Deserialize a snapshot; corruption raises without a partial field."""
    if len(data) < HEADER_SIZE:
        raise SnapshotFormatError(
            f"truncated snapshot: {len(data)} bytes, header needs {HEADER_SIZE}"
        )
    (
        magic, version, flags, n, d, t, s, p, gamma, eps, omega, resid, crc, _pad
    ) = struct.unpack(_HEADER_FMT, data[:HEADER_SIZE])
    if magic != MAGIC:
        raise SnapshotFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise SnapshotFormatError(
            f"unsupported snapshot version {version}, this reader handles {VERSION}"
        )
    payload = data[HEADER_SIZE:]
    expected = 16 * n
    if len(payload) != expected:
        raise SnapshotFormatError(
            f"payload has {len(payload)} bytes, header promises {expected}"
        )
    actual_crc = zlib.crc32(payload) & 0xFFFFFFFF
    if actual_crc != crc:
        raise SnapshotFormatError(
            f"payload checksum mismatch: stored {crc:#010x}, got {actual_crc:#010x}"
        )
    values = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    header = SnapshotHeader(
        n_modes=int(n), half_width=d, t=t, s=s, p=p, gamma=gamma, eps=eps,
        omega=omega, residual_norm=resid,
        is_ground_state=bool(flags & FLAG_GROUND_STATE), version=version,
    )
    return PhysicalField(Grid(int(n), d), values), header


def atomic_write_bytes(path, data: bytes) -> None:
    """Write via a temp file and rename, so readers never see partial files."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_snapshot(path, field: PhysicalField, header: SnapshotHeader) -> None:
    atomic_write_bytes(path, snapshot_to_bytes(field, header))


def read_snapshot(path) -> tuple[PhysicalField, SnapshotHeader]:
    with open(path, "rb") as handle:
        return snapshot_from_bytes(handle.read())


def series_to_csv(series: np.ndarray) -> str:
    """Render a diagnostic series as CSV with 17 significant digits."""
    out = io.StringIO()
    out.write(SERIES_HEADER + "\n")
    for row in series:
        out.write(",".join(format(float(row[name]), ".17g") for name in _SERIES_FIELDS))
        out.write("\n")
    return out.getvalue()


def series_from_csv(text: str) -> np.ndarray:
    """Parse a series CSV back into the structured diagnostics array."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != SERIES_HEADER:
        raise SnapshotFormatError(
            f"series CSV header mismatch: got {lines[0] if lines else '<empty>'!r}"
        )
    dtype = np.dtype([(name, np.float64) for name in _SERIES_FIELDS])
    rows = [tuple(float(cell) for cell in ln.split(",")) for ln in lines[1:]]
    return np.array(rows, dtype=dtype)


def write_series(path, series: np.ndarray) -> None:
    atomic_write_bytes(path, series_to_csv(series).encode("utf-8"))


def read_series(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as handle:
        return series_from_csv(handle.read())
