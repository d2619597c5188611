"""Portable graymap, ASCII (P2) and binary (P5), 8 or 16 bits

Pixels are scaled to [0, 1] on read. On write they are clipped to [0, 1] and
quantized with round-half-up.
"""

import logging

import numpy as np

from core import FileFormatError
from formats.shared import atomic_write

logger = logging.getLogger(__name__)

MIN_SIDE = 5


def _read_header(data: bytes) -> tuple[list[bytes], int]:
    """Return the magic, width, height and maxval tokens and the offset after them"""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise FileFormatError("truncated PGM header")
        c = data[pos : pos + 1]
        if c == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif c.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
                pos += 1
            tokens.append(data[start:pos])
    return tokens, pos


def read_pgm(path: str) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    tokens, pos = _read_header(data)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise FileFormatError(f"{path}: not a PGM file (magic {magic!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FileFormatError(f"{path}: malformed PGM header") from None
    if not 0 < maxval <= 65535:
        raise FileFormatError(f"{path}: maxval {maxval} outside 1..65535")
    if width < MIN_SIDE or height < MIN_SIDE:
        raise FileFormatError(f"{path}: image {height} x {width} smaller than {MIN_SIDE} x {MIN_SIDE}")

    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        raster = data[pos + 1 :]
        dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
        if len(raster) < count * dtype.itemsize:
            raise FileFormatError(f"{path}: raster holds fewer than {count} pixels")
        pixels = np.frombuffer(raster, dtype=dtype, count=count).astype(float)
    else:
        words = []
        for line in data[pos:].splitlines():
            words.extend(line.split(b"#", 1)[0].split())
        if len(words) != count:
            raise FileFormatError(f"{path}: expected {count} pixels, found {len(words)}")
        try:
            pixels = np.array([int(w) for w in words], dtype=float)
        except ValueError:
            raise FileFormatError(f"{path}: non-integer pixel value") from None

    if np.any(pixels > maxval) or np.any(pixels < 0):
        raise FileFormatError(f"{path}: pixel values outside 0..{maxval}")
    return pixels.reshape(height, width) / maxval


def quantize(image: np.ndarray, maxval: int) -> np.ndarray:
    clipped = np.clip(image, 0.0, 1.0)
    if np.any(clipped != image):
        logger.debug("clipped %d pixels to [0, 1]", int(np.count_nonzero(clipped != image)))
    return np.floor(clipped * maxval + 0.5).astype(np.int64)


def write_pgm(path: str, image: np.ndarray, maxval: int = 255, binary: bool = True):
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise FileFormatError(f"PGM needs a 2D image, got shape {image.shape}")
    if not 0 < maxval <= 65535:
        raise FileFormatError(f"maxval {maxval} outside 1..65535")
    height, width = image.shape
    levels = quantize(image, maxval)
    if binary:
        dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
        header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
        atomic_write(path, header + levels.astype(dtype).tobytes())
    else:
        rows = "\n".join(" ".join(str(v) for v in row) for row in levels)
        atomic_write(path, f"P2\n{width} {height}\n{maxval}\n{rows}\n")
