"""Reading and writing 8-bit grayscale images in the netpbm PGM formats.

Supports P2 (ASCII) and P5 (binary) with maxval up to 255. Images are
stored row-major with the origin at the top-left corner, matching the
raster order of the format itself. Inputs with maxval < 255 are accepted
and their samples kept as-is (no rescaling).
"""

from dataclasses import dataclass

import numpy as np


class PgmError(Exception):
    """Base error for unusable PGM input."""


class MalformedHeader(PgmError):
    """Bad magic number or non-numeric header fields."""


class TruncatedData(PgmError):
    """Fewer samples available than width * height requires."""


class UnsupportedMaxval(PgmError):
    """Declared maxval exceeds 255."""


@dataclass(eq=False)
class GrayImage:
    """8-bit grayscale raster; ``pixels`` has shape (height, width), dtype uint8."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (self.height, self.width):
            raise ValueError(
                f"pixel array shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}"
            )

    @classmethod
    def from_flat(cls, width: int, height: int, values) -> "GrayImage":
        """Build an image from a flat row-major sequence of 0..255 ints."""
        arr = np.asarray(list(values), dtype=np.int64)
        if arr.size != width * height:
            raise ValueError(f"need {width * height} values, got {arr.size}")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("pixel values must lie in [0, 255]")
        return cls(width, height, arr.astype(np.uint8).reshape(height, width))


_WHITESPACE = frozenset(b" \t\n\r\x0b\x0c")
_COMMENT = ord("#")


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Scan the next header token, skipping whitespace and '#' comments."""
    n = len(data)
    while pos < n:
        byte = data[pos]
        if byte == _COMMENT:
            while pos < n and data[pos] not in (10, 13):  # to end of line
                pos += 1
        elif byte in _WHITESPACE:
            pos += 1
        else:
            break
    if pos >= n:
        raise MalformedHeader("unexpected end of input in header")
    start = pos
    while pos < n and data[pos] not in _WHITESPACE and data[pos] != _COMMENT:
        pos += 1
    return data[start:pos], pos


def _int_token(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _next_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise MalformedHeader(f"non-numeric {what}: {token!r}") from None
    return value, pos


def read_pgm(data: bytes) -> GrayImage:
    """Parse P2/P5 bytes into a GrayImage.

    Raises MalformedHeader, UnsupportedMaxval or TruncatedData; never
    zero-fills missing samples.
    """
    magic, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise MalformedHeader(f"not a P2/P5 PGM file (magic {magic!r})")
    width, pos = _int_token(data, pos, "width")
    height, pos = _int_token(data, pos, "height")
    maxval, pos = _int_token(data, pos, "maxval")
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if maxval > 255:
        raise UnsupportedMaxval(f"maxval {maxval} exceeds 255")
    if maxval < 1:
        raise MalformedHeader(f"bad maxval {maxval}")
    count = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if pos >= len(data) or data[pos] not in _WHITESPACE:
            raise MalformedHeader("missing whitespace before binary raster")
        pos += 1
        raster = data[pos : pos + count]
        if len(raster) < count:
            raise TruncatedData(f"need {count} samples, found {len(raster)}")
        pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
        return GrayImage(width, height, pixels.copy())

    values = np.empty(count, dtype=np.uint8)
    for i in range(count):
        try:
            token, pos = _next_token(data, pos)
        except MalformedHeader:
            raise TruncatedData(f"need {count} samples, found {i}") from None
        try:
            sample = int(token)
        except ValueError:
            raise PgmError(f"sample #{i} is not a number: {token!r}") from None
        if sample < 0 or sample > 255:
            raise PgmError(f"sample #{i} out of range: {sample}")
        values[i] = sample
    return GrayImage(width, height, values.reshape(height, width))


def write_pgm(img: GrayImage, variant: str = "binary") -> bytes:
    """Serialize an image as PGM bytes; ``variant`` is "ascii" or "binary".

    read_pgm(write_pgm(img, v)) reproduces the image exactly for both
    variants.
    """
    if variant not in ("ascii", "binary"):
        raise ValueError(f"unknown variant {variant!r}")
    magic = "P2" if variant == "ascii" else "P5"
    header = f"{magic}\n{img.width} {img.height}\n255\n"
    if variant == "binary":
        return header.encode("ascii") + img.pixels.tobytes()
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in img.pixels)
    return (header + body + "\n").encode("ascii")
