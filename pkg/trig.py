"""Unitary DFT, orthonormal DCT-II/III and involutory DST-I

All three are scaled to the entry-wise matrices

    F_ij = exp(-i 2pi (i-1)(j-1) / m) / sqrt(m)
    C_ij = sqrt((2 - delta_i1) / m) cos((i-1)(2j-1) pi / (2m))
    Q_ij = sqrt(2 / (m+1)) sin(i j pi / (m+1))

so every other module can rely on the exact matrices, whatever the native
scaling of the backend.
"""

import enum
import functools
import logging
import typing

import numpy as np
import scipy.fft

from core import CACHE_SIZE, THREADS, EmptyInputError, DimensionError

logger = logging.getLogger(__name__)


class TrigKind(enum.Enum):
    FOURIER = "fourier"
    COSINE = "cosine"
    SINE = "sine"


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class TrigPlan(typing.NamedTuple):
    kind: TrigKind
    size: int
    direction: Direction

    @property
    def matrix_name(self) -> str:
        names = {
            (TrigKind.FOURIER, Direction.FORWARD): "F",
            (TrigKind.FOURIER, Direction.INVERSE): "F^H",
            (TrigKind.COSINE, Direction.FORWARD): "C",
            (TrigKind.COSINE, Direction.INVERSE): "C^T",
        }
        return names.get((self.kind, self.direction), "Q")

    def apply(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        v = np.asarray(v)
        if v.ndim == 0 or v.shape[axis] == 0:
            raise EmptyInputError(f"cannot apply {self.matrix_name} to an empty vector")
        if v.shape[axis] != self.size:
            raise DimensionError(
                f"plan {self.matrix_name} has size {self.size}, got {v.shape[axis]}"
            )
        forward = self.direction is Direction.FORWARD
        if self.kind is TrigKind.FOURIER:
            fn = scipy.fft.fft if forward else scipy.fft.ifft
            return fn(v, axis=axis, norm="ortho", workers=THREADS)
        if np.iscomplexobj(v):
            return self.apply(v.real, axis) + 1j * self.apply(v.imag, axis)
        if self.size == 1:
            # 1 x 1 orthogonal matrices are the identity
            return np.array(v, dtype=np.result_type(v, float), copy=True)
        if self.kind is TrigKind.COSINE:
            fn = scipy.fft.dct if forward else scipy.fft.idct
            return fn(v, type=2, axis=axis, norm="ortho", workers=THREADS)
        # DST-I is symmetric and orthogonal: Q is its own inverse
        return scipy.fft.dst(v, type=1, axis=axis, norm="ortho", workers=THREADS)


@functools.lru_cache(maxsize=CACHE_SIZE)
def get_plan(kind: TrigKind, size: int, direction: Direction) -> TrigPlan:
    if size < 1:
        raise EmptyInputError(f"transform size must be positive, got {size}")
    logger.debug("new plan: %s size=%d %s", kind.value, size, direction.value)
    return TrigPlan(kind, size, direction)


def _apply(kind: TrigKind, v, direction: Direction, axis: int) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim == 0 or v.shape[axis] == 0:
        raise EmptyInputError(f"cannot apply a {kind.value} transform to an empty vector")
    return get_plan(kind, v.shape[axis], direction).apply(v, axis=axis)


def fourier_apply(v, direction: Direction = Direction.FORWARD, axis: int = -1) -> np.ndarray:
    """F @ v (forward) or F^H @ v (inverse)"""
    return _apply(TrigKind.FOURIER, v, direction, axis)


def cosine_apply(v, direction: Direction = Direction.FORWARD, axis: int = -1) -> np.ndarray:
    """C @ v (forward, DCT-II) or C^T @ v (inverse, DCT-III)"""
    return _apply(TrigKind.COSINE, v, direction, axis)


def sine_apply(v, axis: int = -1) -> np.ndarray:
    """Q @ v; Q is an involution so there is no separate inverse"""
    return _apply(TrigKind.SINE, v, Direction.FORWARD, axis)
