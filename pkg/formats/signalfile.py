"""One real value per line, '#' lines are comments

A comment line `# dims n1 n2` marks a row-major flattened image, which lets
CSV carry 2D data losslessly.
"""

import warnings

import numpy as np

from core import DimensionError, FileFormatError
from formats.shared import atomic_write, format_number

MIN_VALUES = 5


def _header_dims(path: str, lines: list[str]) -> None | tuple[int, int]:
    dims = None
    for lineno, line in enumerate(lines, start=1):
        fields = line.lstrip("# \t").split() if line.lstrip().startswith("#") else []
        if len(fields) == 3 and fields[0] == "dims":
            try:
                dims = (int(fields[1]), int(fields[2]))
            except ValueError:
                raise FileFormatError(f"{path}:{lineno}: bad dims line") from None
    return dims


def read_signal(path: str, dims: None | tuple[int, int] = None) -> np.ndarray:
    with open(path, encoding="utf-8") as f:
        lines = f.readlines()
    header_dims = _header_dims(path, lines)
    with warnings.catch_warnings():
        # an empty file is reported below as too short
        warnings.simplefilter("ignore", UserWarning)
        try:
            signal = np.loadtxt(lines, delimiter=",", comments="#", usecols=0, ndmin=1)
        except ValueError as exc:
            raise FileFormatError(f"{path}: {exc}") from None
    if not np.all(np.isfinite(signal)):
        raise FileFormatError(f"{path}: non-finite value")
    if signal.size < MIN_VALUES:
        raise FileFormatError(f"{path}: need at least {MIN_VALUES} values, found {signal.size}")
    dims = dims or header_dims
    if dims is None:
        return signal
    if dims[0] * dims[1] != signal.size:
        raise DimensionError(f"{path}: {signal.size} values do not fill {dims[0]} x {dims[1]}")
    return signal.reshape(dims)


def write_signal(path: str, values: np.ndarray, header: str = ""):
    values = np.asarray(values)
    lines = [f"# {line}" for line in header.splitlines()]
    if values.ndim == 2:
        lines.append(f"# dims {values.shape[0]} {values.shape[1]}")
    lines.extend(format_number(v) for v in values.ravel())
    atomic_write(path, "\n".join(lines) + "\n")
