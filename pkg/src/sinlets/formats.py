"""
Text and image file formats.

Coefficient file::

    sinlets-coefficients 1
    family erf
    kind sin
    center 0
    width 2
    count 3
    0.5
    -1.25
    0

Signal file: ``time,value`` rows, ``#`` comments; comma or whitespace
delimited on read, comma on write.

Image coefficient file: like the coefficient file, with per-axis centers
and widths, the pixel mapping, the coefficient shape ``K1 K2``, the source
image size, and one comma-separated row of ``K2`` values per ``k1``.

Images: binary NetPBM, ``P5`` (gray) and ``P6`` (color, converted to
luminance on read). Pixels map to [0, 1] by ``value/maxval``.

Every float is written with 17 significant digits, so write -> read -> write
is byte-identical.
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .basis import SinletBasis
from .errors import DomainError, FormatError
from .image import Basis2D, GrayImage, ImageCoefficients
from .transform import CoefficientVector, SampledSignal

COEFF_MAGIC = "sinlets-coefficients"
IMAGE_MAGIC = "sinlets-image-coefficients"
FORMAT_VERSION = 1
_SPLIT = re.compile(r"[,\s]+")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_float(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"not a number: {token!r}", line) from None
    if not np.isfinite(value):
        raise FormatError(f"non-finite number: {token!r}", line)
    return value


def _parse_int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"not an integer: {token!r}", line) from None


class _Lines:
    """Numbered, stripped, non-empty lines of a text file."""

    def __init__(self, text: str):
        self._items = [(i + 1, raw.strip()) for i, raw in enumerate(text.splitlines())
                       if raw.strip()]
        self._pos = 0

    def next(self, what: str) -> tuple[int, str]:
        if self._pos >= len(self._items):
            raise FormatError(f"unexpected end of file, expected {what}")
        item = self._items[self._pos]
        self._pos += 1
        return item

    def field(self, key: str) -> tuple[int, str]:
        line, text = self.next(key)
        parts = text.split(None, 1)
        if len(parts) != 2 or parts[0] != key:
            raise FormatError(f"expected '{key} <value>', got {text!r}", line)
        return line, parts[1].strip()

    def rest(self):
        items = self._items[self._pos:]
        self._pos = len(self._items)
        return items


def _header(lines: _Lines, magic: str) -> None:
    line, text = lines.next("header")
    parts = text.split()
    if len(parts) != 2 or parts[0] != magic:
        raise FormatError(f"missing '{magic}' header", line)
    version = _parse_int(parts[1], line)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}", line)


def _basis_fields(lines: _Lines, family: str, prefix: str = "") -> SinletBasis:
    cl, center = lines.field(prefix + "center")
    wl, width = lines.field(prefix + "width")
    try:
        return SinletBasis.create(family, _parse_float(center, cl), _parse_float(width, wl))
    except DomainError as exc:
        raise FormatError(str(exc), wl) from None


# -- coefficient vectors ------------------------------------------------------

def format_coefficients(c: CoefficientVector) -> str:
    out = [f"{COEFF_MAGIC} {FORMAT_VERSION}",
           f"family {c.family.value}",
           f"kind {c.kind.value}",
           f"center {fmt(c.center)}",
           f"width {fmt(c.width)}",
           f"count {len(c)}"]
    out.extend(fmt(v) for v in c.coeffs)
    return "\n".join(out) + "\n"


def parse_coefficients(text: str) -> CoefficientVector:
    lines = _Lines(text)
    _header(lines, COEFF_MAGIC)
    fl, family = lines.field("family")
    if family not in ("erf", "logistic"):
        raise FormatError(f"unknown family {family!r}", fl)
    kl, kind = lines.field("kind")
    if kind not in ("sin", "cos"):
        raise FormatError(f"unknown kind {kind!r}", kl)
    basis = _basis_fields(lines, family)
    nl, count = lines.field("count")
    count = _parse_int(count, nl)
    body = lines.rest()
    if count < 1 or len(body) != count:
        raise FormatError(f"header announces {count} coefficients, found {len(body)}", nl)
    values = [_parse_float(text, line) for line, text in body]
    return CoefficientVector(kind, basis, values)


def write_coefficients(path, c: CoefficientVector) -> None:
    Path(path).write_text(format_coefficients(c))


def read_coefficients(path) -> CoefficientVector:
    return parse_coefficients(Path(path).read_text())


# -- signals ------------------------------------------------------------------

def format_signal(signal: SampledSignal, header: str = "time,value") -> str:
    out = [f"# {header}"]
    out.extend(f"{fmt(t)},{fmt(v)}" for t, v in zip(signal.times, signal.values))
    return "\n".join(out) + "\n"


def parse_signal(text: str) -> SampledSignal:
    times, values = [], []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p for p in _SPLIT.split(line) if p]
        if len(parts) != 2:
            raise FormatError(f"expected 2 columns, found {len(parts)}", number)
        t, v = _parse_float(parts[0], number), _parse_float(parts[1], number)
        if times and t <= times[-1]:
            raise FormatError("times must be strictly increasing", number)
        times.append(t)
        values.append(v)
    if len(times) < 2:
        raise FormatError("a signal file needs at least two samples")
    return SampledSignal(times, values)


def write_signal(path, signal: SampledSignal) -> None:
    Path(path).write_text(format_signal(signal))


def read_signal(path) -> SampledSignal:
    return parse_signal(Path(path).read_text())


def write_table(path, columns: dict[str, np.ndarray]) -> None:
    """Plot-ready CSV with a ``#``-prefixed header row."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float).ravel() for k in names])
    out = ["# " + ",".join(names)]
    out.extend(",".join(fmt(v) for v in row) for row in data)
    Path(path).write_text("\n".join(out) + "\n")


# -- image coefficients -------------------------------------------------------

def format_image_coefficients(c: ImageCoefficients) -> str:
    b = c.basis
    source = c.source or (0, 0)
    out = [f"{IMAGE_MAGIC} {FORMAT_VERSION}",
           f"family {b.family.value}",
           f"mapping {c.mapping}",
           f"x-center {fmt(b.bx.center)}",
           f"x-width {fmt(b.bx.width)}",
           f"y-center {fmt(b.by.center)}",
           f"y-width {fmt(b.by.width)}",
           f"shape {c.shape[0]} {c.shape[1]}",
           f"source {source[0]} {source[1]}"]
    out.extend(",".join(fmt(v) for v in row) for row in c.coeffs)
    return "\n".join(out) + "\n"


def parse_image_coefficients(text: str) -> ImageCoefficients:
    lines = _Lines(text)
    _header(lines, IMAGE_MAGIC)
    fl, family = lines.field("family")
    if family not in ("erf", "logistic"):
        raise FormatError(f"unknown family {family!r}", fl)
    ml, mapping = lines.field("mapping")
    if mapping not in ("phase", "uniform"):
        raise FormatError(f"unknown mapping {mapping!r}", ml)
    bx = _basis_fields(lines, family, "x-")
    by = _basis_fields(lines, family, "y-")
    sl, shape = lines.field("shape")
    dims = shape.split()
    if len(dims) != 2:
        raise FormatError("shape needs two integers", sl)
    k1, k2 = (_parse_int(d, sl) for d in dims)
    ol, source = lines.field("source")
    src = source.split()
    if len(src) != 2:
        raise FormatError("source needs two integers", ol)
    w, h = (_parse_int(d, ol) for d in src)
    body = lines.rest()
    if k1 < 1 or k2 < 1 or len(body) != k1:
        raise FormatError(f"expected {k1} coefficient rows, found {len(body)}", sl)
    rows = []
    for line, text in body:
        row = [_parse_float(tok, line) for tok in _SPLIT.split(text) if tok]
        if len(row) != k2:
            raise FormatError(f"expected {k2} values, found {len(row)}", line)
        rows.append(row)
    return ImageCoefficients(Basis2D(bx, by), np.array(rows), mapping,
                             (w, h) if w > 0 and h > 0 else None)


def write_image_coefficients(path, c: ImageCoefficients) -> None:
    Path(path).write_text(format_image_coefficients(c))


def read_image_coefficients(path) -> ImageCoefficients:
    return parse_image_coefficients(Path(path).read_text())


# -- NetPBM -------------------------------------------------------------------

def _pnm_header(data: bytes):
    """Return (magic, width, height, maxval, offset of raster)."""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise FormatError("truncated NetPBM header")
        if data[pos:pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    magic = tokens[0].decode("ascii", "replace")
    if magic not in ("P5", "P6"):
        raise FormatError(f"unsupported NetPBM type {magic!r} (need P5 or P6)")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError("malformed NetPBM header") from None
    if width < 1 or height < 1 or not 0 < maxval < 65536:
        raise FormatError("invalid NetPBM dimensions or maxval")
    return magic, width, height, maxval, pos + 1


def decode_pnm(data: bytes) -> GrayImage:
    magic, width, height, maxval, offset = _pnm_header(data)
    channels = 3 if magic == "P6" else 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * channels
    raster = data[offset:offset + count * dtype.itemsize]
    if len(raster) != count * dtype.itemsize:
        raise FormatError("truncated NetPBM raster")
    px = np.frombuffer(raster, dtype=dtype).astype(float) / maxval
    if channels == 3:
        px = px.reshape(height, width, 3) @ np.array([0.299, 0.587, 0.114])
    else:
        px = px.reshape(height, width)
    return GrayImage(np.clip(px, 0.0, 1.0))


def encode_pgm(img: GrayImage) -> bytes:
    px = np.rint(np.clip(img.pixels, 0.0, 1.0) * 255.0).astype(np.uint8)
    return f"P5\n{img.width} {img.height}\n255\n".encode("ascii") + px.tobytes()


def read_image(path) -> GrayImage:
    return decode_pnm(Path(path).read_bytes())


def write_pgm(path, img: GrayImage) -> None:
    Path(path).write_bytes(encode_pgm(img))
