"""File formats: 16-bit binary PGM rasters and CSV tables.

PGM layout (P5)::

    P5
    # fibgeom box=<xmin>,<ymin>,<xmax>,<ymax> max=<largest sample>
    <width> <height>
    65535
    <big-endian uint16 samples, row-major, top row (ymax) first>

Samples are ``round(value / max * 65535)``; the ``max`` comment lets a reader
recover the original scale.
"""
from __future__ import annotations

import csv
import io
import re

import numpy as np

from fibgeom.errors import DomainError
from fibgeom.ifs import RasterField

MAXVAL = 65535
_LUMA = np.array([0.2126, 0.7152, 0.0722])


def field_to_gray(field: RasterField) -> np.ndarray:
    grid = np.asarray(field.grid, dtype=float)
    if grid.ndim == 3:
        grid = grid @ _LUMA
    return grid


def pgm_bytes(field: RasterField) -> bytes:
    gray = field_to_gray(field)
    if np.any(gray < 0) or not np.all(np.isfinite(gray)):
        raise DomainError("PGM samples must be finite and non-negative")
    top = float(gray.max())
    scaled = np.zeros_like(gray) if top == 0 else np.rint(gray / top * MAXVAL)
    h, w = gray.shape
    box = ",".join(repr(float(v)) for v in field.box)
    header = f"P5\n# fibgeom box={box} max={top!r}\n{w} {h}\n{MAXVAL}\n".encode("ascii")
    # flip so the first written row is the top of the box
    return header + scaled[::-1].astype(">u2").tobytes()


def write_pgm(field: RasterField, path) -> None:
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(field))


def read_pgm(data: bytes) -> RasterField:
    """Parse bytes produced by :func:`pgm_bytes` back into a (rescaled) field."""
    tokens = []
    comments = []
    pos = 0
    while len(tokens) < 4:
        m = re.compile(rb"\s*(#[^\n]*\n|\S+)").match(data, pos)
        if m is None:
            raise DomainError("truncated PGM header")
        tok = m.group(1)
        pos = m.end()
        if tok.startswith(b"#"):
            comments.append(tok.decode("ascii"))
        else:
            tokens.append(tok)
    magic, w, h, maxval = tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3])
    if magic != b"P5" or maxval != MAXVAL:
        raise DomainError("expected a 16-bit P5 PGM")
    pos += 1  # single whitespace after maxval
    raw = np.frombuffer(data[pos : pos + 2 * w * h], dtype=">u2").reshape(h, w)[::-1]
    box = (0.0, 0.0, 1.0, 1.0)
    top = 1.0
    for c in comments:
        mb = re.search(r"box=([^ ]+)", c)
        mm = re.search(r"max=([^ \n]+)", c)
        if mb:
            box = tuple(float(v) for v in mb.group(1).split(","))
        if mm:
            top = float(mm.group(1))
    return RasterField(raw.astype(float) / MAXVAL * top, box)


def rows_to_csv(rows, fieldnames=None) -> str:
    """Dict rows (or tuples with ``fieldnames``) to CSV text with a header row."""
    buf = io.StringIO()
    if rows and isinstance(rows[0], dict):
        fieldnames = fieldnames or list(rows[0].keys())
        writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in fieldnames})
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fieldnames)
        writer.writerows(rows)
    return buf.getvalue()


def read_xy_csv(text: str):
    """Read two numeric columns; a non-numeric first row is treated as a header."""
    out = []
    for k, row in enumerate(csv.reader(io.StringIO(text))):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            out.append((float(row[0]), float(row[1])))
        except (ValueError, IndexError):
            if k == 0:
                continue
            raise DomainError(f"row {k + 1} is not two numbers: {row!r}") from None
    return out


def parse_number_list(text: str) -> list[float]:
    """``"0, 1, 2.5"`` or CSV text with one number per cell."""
    vals = []
    for row in csv.reader(io.StringIO(text)):
        for cell in row:
            cell = cell.strip()
            if cell:
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise DomainError(f"not a number: {cell!r}") from None
    return vals
