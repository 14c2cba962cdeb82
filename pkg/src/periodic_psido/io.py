"""File formats for signals, symbols and period-cell samples.

Signal CSV
    header ``x0,..,x{d-1},real,imag``; one row per node in row-major order.
Signal binary
    ``b"GSIG"``, uint32 version, uint32 ``d``, uint32 ``N``, float64 ``T``,
    then little-endian float64 ``(real, imag)`` pairs in row-major order.
Symbol JSON
    ``{"schema": 1, "L": [[...]], "convention": ..., "records": [{"kappa": [...], "re": .., "im": ..}]}``.
Cell CSV
    header ``y0,..,y{n-1},real,imag`` with unit-cell coordinates ``y = j/M``;
    the period matrix is supplied separately.

Floats in CSV files carry 17 significant digits.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .lattice import PeriodMatrix
from .signal import GridSignal
from .symbol import COEFFICIENT_CONVENTION, PeriodCellSamples, PeriodicSymbol

__all__ = [
    "SCHEMA",
    "FormatError",
    "write_signal_csv",
    "read_signal_csv",
    "write_signal_binary",
    "read_signal_binary",
    "write_signal",
    "read_signal",
    "write_symbol_json",
    "read_symbol_json",
    "symbol_to_dict",
    "symbol_from_dict",
    "write_cell_csv",
    "read_cell_csv",
    "fmt",
]

SCHEMA = 1
MAGIC = b"GSIG"
VERSION = 1
_HEADER = struct.Struct("<4sIIId")


class FormatError(ValueError):
    """A file exists but its contents do not follow the expected layout."""


def fmt(x: float) -> str:
    return "%.17g" % x


def write_signal_csv(path, f: GridSignal) -> None:
    pts = f.points.reshape(-1, f.d)
    vals = f.values.reshape(-1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(f.d)] + ["real", "imag"])
        for p, v in zip(pts, vals):
            w.writerow([fmt(c) for c in p] + [fmt(v.real), fmt(v.imag)])


def read_signal_csv(path) -> GridSignal:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: empty file")
    header = rows[0]
    d = len(header) - 2
    if d < 1 or header[-2:] != ["real", "imag"] or header[:d] != [f"x{i}" for i in range(d)]:
        raise FormatError(f"{path}: unexpected header {header}")
    try:
        data = np.array(rows[1:], dtype=float)
    except ValueError as exc:
        raise FormatError(f"{path}: non-numeric entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != d + 2:
        raise FormatError(f"{path}: ragged rows")
    n = round(len(data) ** (1.0 / d))
    if n**d != len(data):
        raise FormatError(f"{path}: {len(data)} rows do not form a square grid in d = {d}")
    extent = -2.0 * float(data[:, 0].min())
    f = GridSignal((data[:, d] + 1j * data[:, d + 1]).reshape((n,) * d), extent)
    if not np.allclose(f.points.reshape(-1, d), data[:, :d], rtol=0, atol=1e-9 * max(extent, 1)):
        raise FormatError(f"{path}: node coordinates are not the centred grid of extent {extent:g}")
    return f


def write_signal_binary(path, f: GridSignal) -> None:
    buf = np.empty(f.values.size * 2, dtype="<f8")
    flat = f.values.reshape(-1)
    buf[0::2] = flat.real
    buf[1::2] = flat.imag
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, f.d, f.npoints, float(f.extent)))
        fh.write(buf.tobytes())


def read_signal_binary(path) -> GridSignal:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header")
    magic, version, d, n, extent = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    body = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    if body.size != 2 * n**d:
        raise FormatError(f"{path}: expected {2 * n**d} floats, found {body.size}")
    return GridSignal((body[0::2] + 1j * body[1::2]).reshape((n,) * d), extent)


def _is_binary(path) -> bool:
    return Path(path).suffix.lower() in (".bin", ".gsig")


def write_signal(path, f: GridSignal) -> None:
    """Write CSV, or the binary layout for ``.bin``/``.gsig`` suffixes."""
    (write_signal_binary if _is_binary(path) else write_signal_csv)(path, f)


def read_signal(path) -> GridSignal:
    return (read_signal_binary if _is_binary(path) else read_signal_csv)(path)


def symbol_to_dict(p: PeriodicSymbol) -> dict:
    return {
        "schema": SCHEMA,
        "L": p.L.to_list(),
        "convention": COEFFICIENT_CONVENTION,
        "records": [{"kappa": list(k), "re": c.real, "im": c.imag} for k, c in p.coeffs.items()],
    }


def symbol_from_dict(obj: dict) -> PeriodicSymbol:
    try:
        if obj.get("schema", SCHEMA) != SCHEMA:
            raise FormatError(f"unsupported schema {obj.get('schema')}")
        L = PeriodMatrix(obj["L"])
        coeffs = {}
        for rec in obj["records"]:
            k = tuple(int(i) for i in rec["kappa"])
            if k in coeffs:
                raise FormatError(f"duplicate index {k}")
            coeffs[k] = complex(float(rec["re"]), float(rec.get("im", 0.0)))
        return PeriodicSymbol(L, coeffs)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed symbol record ({exc!r})") from None


def write_symbol_json(path, p: PeriodicSymbol) -> None:
    with open(path, "w") as fh:
        json.dump(symbol_to_dict(p), fh, indent=1)
        fh.write("\n")


def read_symbol_json(path) -> PeriodicSymbol:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None
    return symbol_from_dict(obj)


def write_cell_csv(path, samples: PeriodCellSamples) -> None:
    n = samples.L.n
    y = PeriodCellSamples.unit_grid(samples.M, n).reshape(-1, n)
    vals = samples.values.reshape(-1)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"y{i}" for i in range(n)] + ["real", "imag"])
        for p, v in zip(y, vals):
            w.writerow([fmt(c) for c in p] + [fmt(v.real), fmt(v.imag)])


def read_cell_csv(path, L: PeriodMatrix) -> PeriodCellSamples:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    n = L.n
    if not rows or rows[0] != [f"y{i}" for i in range(n)] + ["real", "imag"]:
        raise FormatError(f"{path}: expected header y0..y{n - 1},real,imag")
    try:
        data = np.array(rows[1:], dtype=float)
    except ValueError as exc:
        raise FormatError(f"{path}: non-numeric entry ({exc})") from None
    M = round(len(data) ** (1.0 / n))
    if M**n != len(data) or data.ndim != 2:
        raise FormatError(f"{path}: {len(data)} rows do not form an M^{n} grid")
    if not np.allclose(data[:, :n], PeriodCellSamples.unit_grid(M, n).reshape(-1, n), atol=1e-12):
        raise FormatError(f"{path}: coordinates are not the grid j/M in row-major order")
    return PeriodCellSamples(L, (data[:, n] + 1j * data[:, n + 1]).reshape((M,) * n))
