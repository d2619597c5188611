"""PSF text files

The first line is `rows cols center_row center_col` with a 1-based center,
followed by rows * cols weights in row-major order, whitespace separated.
A PSF whose center is off the middle is zero-padded until it is centered.
"""

import numpy as np

from core import FileFormatError
from blur import Psf
from multidim import Psf2D
from formats.shared import atomic_write, format_number


def _center(weights: np.ndarray, center: tuple[int, int]) -> np.ndarray:
    pad = []
    for size, c in zip(weights.shape, center):
        before, after = c, size - 1 - c
        pad.append((max(0, after - before), max(0, before - after)))
    return np.pad(weights, pad)


def read_psf(path: str, normalize: bool = False) -> Psf | Psf2D:
    with open(path, encoding="utf-8") as f:
        lines = [line for line in f if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        raise FileFormatError(f"{path}: empty PSF file")
    try:
        rows, cols, center_row, center_col = (int(t) for t in lines[0].split())
        weights = np.array([float(t) for line in lines[1:] for t in line.split()])
    except ValueError:
        raise FileFormatError(f"{path}: malformed PSF file") from None
    if rows < 1 or cols < 1:
        raise FileFormatError(f"{path}: bad PSF size {rows} x {cols}")
    if weights.size != rows * cols:
        raise FileFormatError(f"{path}: expected {rows * cols} weights, found {weights.size}")
    if not (1 <= center_row <= rows and 1 <= center_col <= cols):
        raise FileFormatError(f"{path}: center ({center_row}, {center_col}) outside the PSF")

    weights = _center(weights.reshape(rows, cols), (center_row - 1, center_col - 1))
    if weights.shape[0] == 1:
        return Psf.from_weights(weights[0], normalize=normalize)
    if weights.shape[1] == 1:
        return Psf.from_weights(weights[:, 0], normalize=normalize)
    return Psf2D.from_weights(weights, normalize=normalize)


def write_psf(path: str, psf: Psf | Psf2D):
    weights = np.atleast_2d(psf.weights)
    rows, cols = weights.shape
    lines = [f"{rows} {cols} {(rows + 1) // 2} {(cols + 1) // 2}"]
    lines.extend(" ".join(format_number(v) for v in row) for row in weights)
    atomic_write(path, "\n".join(lines) + "\n")
