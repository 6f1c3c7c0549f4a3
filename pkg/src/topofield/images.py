"""Grayscale images as scalar fields: PGM I/O, PSNR, grid samples."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ScalarSample

__all__ = [
    "GrayImage",
    "read_pgm",
    "write_pgm",
    "psnr",
    "image_to_sample",
    "rasterize_values",
    "FormatError",
]


class FormatError(Exception):
    """A file does not conform to its declared format; message carries location."""


@dataclass(frozen=True)
class GrayImage:
    """Row-major 8-bit grayscale image."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            arr = np.asarray(px, dtype=np.int64)
            if arr.min(initial=0) < 0 or arr.max(initial=0) > 255:
                raise ValueError("pixel intensities must lie in 0..255")
            px = arr.astype(np.uint8)
        px = px.reshape(-1).copy()
        if px.shape[0] != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {px.shape[0]}"
            )
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_array(cls, arr) -> "GrayImage":
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d intensity array")
        return cls(arr.shape[1], arr.shape[0], arr.reshape(-1))

    def as_array(self) -> np.ndarray:
        return self.pixels.reshape(self.height, self.width)

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.pixels, other.pixels)
        )


def _pgm_tokens(data: bytes):
    """Yield (token, line) from a PGM header/ASCII body, skipping comments."""
    line = 1
    token = bytearray()
    i = 0
    while i < len(data):
        ch = data[i]
        if ch == 0x23:  # '#' comment to end of line
            while i < len(data) and data[i] not in (0x0A,):
                i += 1
            continue
        if ch in (0x20, 0x09, 0x0D, 0x0A):
            if token:
                yield bytes(token), line
                token.clear()
            if ch == 0x0A:
                line += 1
            i += 1
            continue
        token.append(ch)
        i += 1
    if token:
        yield bytes(token), line


def read_pgm(path) -> GrayImage:
    """Read a P2 (ASCII) or P5 (binary) PGM with maxval exactly 255."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] not in (b"P2", b"P5"):
        raise FormatError(f"{path}: not a P2/P5 PGM (bad magic)")
    binary = data[:2] == b"P5"

    if binary:
        # header = magic, width, height, maxval followed by ONE whitespace byte
        header_fields = []
        i = 2
        while len(header_fields) < 3 and i < len(data):
            while i < len(data) and data[i : i + 1].isspace():
                i += 1
            if i < len(data) and data[i] == 0x23:
                while i < len(data) and data[i] != 0x0A:
                    i += 1
                continue
            start = i
            while i < len(data) and not data[i : i + 1].isspace():
                i += 1
            if i > start:
                header_fields.append(data[start:i])
        if len(header_fields) < 3:
            raise FormatError(f"{path}: truncated PGM header")
        try:
            width, height, maxval = (int(f) for f in header_fields)
        except ValueError:
            raise FormatError(f"{path}: non-numeric PGM header field") from None
        if maxval != 255:
            raise FormatError(f"{path}: maxval must be exactly 255, got {maxval}")
        raster = data[i + 1 :]
        need = width * height
        if len(raster) < need:
            raise FormatError(
                f"{path}: raster truncated ({len(raster)} of {need} bytes)"
            )
        pixels = np.frombuffer(raster[:need], dtype=np.uint8)
        return GrayImage(width, height, pixels)

    tokens = list(_pgm_tokens(data[2:]))
    if len(tokens) < 3:
        raise FormatError(f"{path}: truncated PGM header")
    try:
        width = int(tokens[0][0])
        height = int(tokens[1][0])
        maxval = int(tokens[2][0])
    except ValueError:
        raise FormatError(f"{path}: non-numeric PGM header field") from None
    if maxval != 255:
        raise FormatError(f"{path}: maxval must be exactly 255, got {maxval}")
    body = tokens[3:]
    if len(body) != width * height:
        raise FormatError(
            f"{path}: expected {width * height} pixels, found {len(body)}"
        )
    pixels = np.empty(width * height, dtype=np.uint8)
    for pos, (tok, line) in enumerate(body):
        try:
            v = int(tok)
        except ValueError:
            raise FormatError(f"{path}:{line}: bad pixel token {tok!r}") from None
        if not (0 <= v <= maxval):
            raise FormatError(f"{path}:{line}: pixel value {v} out of range")
        pixels[pos] = v
    return GrayImage(width, height, pixels)


def write_pgm(img: GrayImage, path, binary: bool = True) -> None:
    """Write a PGM, P5 when binary else P2, always with maxval 255."""
    header = f"{'P5' if binary else 'P2'}\n{img.width} {img.height}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        if binary:
            fh.write(img.pixels.tobytes())
        else:
            rows = img.as_array()
            for r in range(img.height):
                fh.write(" ".join(str(int(v)) for v in rows[r]).encode("ascii"))
                fh.write(b"\n")


def psnr(I: GrayImage, O: GrayImage) -> float:
    """Peak signal-to-noise ratio 10*log10(256^2 / MSE); +inf for equal images."""
    if (I.width, I.height) != (O.width, O.height):
        raise ValueError("images must have equal dimensions")
    diff = I.pixels.astype(np.float64) - O.pixels.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(256.0 * 256.0 / mse)


def image_to_sample(img: GrayImage) -> ScalarSample:
    """Pixels as a scalar field on the unit grid: (row r, col c) -> point (c, r)."""
    cols, rows = np.meshgrid(np.arange(img.width), np.arange(img.height))
    points = np.column_stack([cols.reshape(-1), rows.reshape(-1)]).astype(np.float64)
    return ScalarSample(points, img.pixels.astype(np.float64))


def rasterize_values(values, width: int, height: int) -> GrayImage:
    """Round and clamp a row-major value array back into an 8-bit image."""
    arr = np.asarray(values, dtype=np.float64).reshape(-1)
    if arr.shape[0] != width * height:
        raise ValueError("value count does not match image dimensions")
    return GrayImage(width, height, np.clip(np.rint(arr), 0, 255).astype(np.uint8))
