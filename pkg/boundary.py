"""Bases that diagonalize the blurring operators

The antireflective transform T and the higher-order transforms T_C, T_F all
share one block layout:

        [ q1    c_a^T    0  ]
    T = [ q^    X^-1    Jq^ ]
        [ 0     c_b^T   q1  ]

where q = (q1, q^, 0) is a unit-norm sampled polynomial, X is a fast
trigonometric transform of order n-2 and J is the flip matrix. Applying T
costs one X^-1. Applying inv(T) costs one X plus O(n) work, through the
decoupled inverse of T with zero boundary rows and a rank-2 Woodbury
correction. All correction data is computed once per (basis, n).
"""

import dataclasses
import enum
import functools
import logging

import numpy as np
import scipy.linalg

from core import (
    CACHE_SIZE,
    CONDITION_LIMIT,
    MIN_ORDER,
    BaseTransform,
    DegenerateTransformError,
    SizeError,
    frozen,
)
from trig import Direction, TrigKind, TrigPlan, get_plan

logger = logging.getLogger(__name__)


class BoundaryBasis(enum.Enum):
    ANTIREFLECTIVE = "antireflective"
    HOC_COSINE = "hoc-cosine"
    HOC_FOURIER = "hoc-fourier"


# interior kind, then the directions giving X^-1 (the block of T), X and X^T
_INTERIOR = {
    BoundaryBasis.ANTIREFLECTIVE: (
        TrigKind.SINE,
        Direction.FORWARD,
        Direction.FORWARD,
        Direction.FORWARD,
    ),
    BoundaryBasis.HOC_COSINE: (
        TrigKind.COSINE,
        Direction.INVERSE,
        Direction.FORWARD,
        Direction.INVERSE,
    ),
    # the unitary DFT matrix is symmetric, so X^T = X = F
    BoundaryBasis.HOC_FOURIER: (
        TrigKind.FOURIER,
        Direction.INVERSE,
        Direction.FORWARD,
        Direction.FORWARD,
    ),
}


def _check_order(n: int):
    if n < MIN_ORDER:
        raise SizeError(f"order must be at least {MIN_ORDER}, got {n}")


def extended_grid(basis: BoundaryBasis, n: int) -> tuple[tuple[float, float], np.ndarray]:
    """Return the interval [a, b] and its n equispaced sample points"""
    _check_order(n)
    if basis is BoundaryBasis.ANTIREFLECTIVE:
        a, b = 0.0, np.pi
    elif basis is BoundaryBasis.HOC_COSINE:
        a, b = -np.pi / (2 * n - 4), (2 * n - 3) * np.pi / (2 * n - 4)
    else:
        a, b = -2 * np.pi / (n - 2), 2 * np.pi
    # linspace hits both endpoints exactly, so the last sample of q is 0
    return (a, b), np.linspace(a, b, n)


def _boundary_column(basis: BoundaryBasis, n: int) -> np.ndarray:
    if basis is BoundaryBasis.ANTIREFLECTIVE:
        column = 1.0 - np.arange(n) / (n - 1)
    else:
        (_, b), points = extended_grid(basis, n)
        column = (b - points) ** 2
    return column / np.linalg.norm(column)


def _boundary_rows(basis: BoundaryBasis, n: int) -> tuple[np.ndarray, np.ndarray]:
    k = n - 2
    j = np.arange(k)
    if basis is BoundaryBasis.ANTIREFLECTIVE:
        # sin(j x) vanishes at both ends of [0, pi]
        return np.zeros(k), np.zeros(k)
    (a, _), _ = extended_grid(basis, n)
    if basis is BoundaryBasis.HOC_COSINE:
        scale = np.full(k, np.sqrt(2.0 / k))
        scale[0] = np.sqrt(1.0 / k)
        c_a = scale * np.cos(j * a)
        # b = pi - a
        return c_a, np.where(j % 2 == 0, 1.0, -1.0) * c_a
    c_a = np.exp(1j * j * a) / np.sqrt(k)
    return c_a, np.full(k, 1 / np.sqrt(k), dtype=complex)


@dataclasses.dataclass(frozen=True, eq=False)
class StructuredTransform(BaseTransform):
    basis: BoundaryBasis
    order: int

    # q (or p for the antireflective basis): first column, unit 2-norm, last entry 0
    column: np.ndarray
    c_a: np.ndarray
    c_b: np.ndarray

    # decoupled inverse: alpha on the corners, v and w as correction columns
    alpha: float
    v: np.ndarray
    w: np.ndarray

    # c_a^T X and c_b^T X
    row_a: np.ndarray
    row_b: np.ndarray

    # entries of [c_a | c_b]^T [v | w]
    corner: np.ndarray
    capacitance_inverse: np.ndarray

    grid: np.ndarray
    interval: tuple[float, float]

    @property
    def n(self) -> int:
        return self.order

    @property
    def is_complex(self) -> bool:
        return self.basis is BoundaryBasis.HOC_FOURIER

    @property
    def _block(self) -> TrigPlan:
        kind, block, _, _ = _INTERIOR[self.basis]
        return get_plan(kind, self.order - 2, block)

    @property
    def _x(self) -> TrigPlan:
        kind, _, x, _ = _INTERIOR[self.basis]
        return get_plan(kind, self.order - 2, x)

    def apply(self, x: np.ndarray, axis: int = -1) -> np.ndarray:
        x = np.asarray(x)
        self._check_length(x, axis)
        x = np.moveaxis(x, axis, -1)
        head, mid, tail = x[..., 0], x[..., 1:-1], x[..., -1]
        q = self.column

        out = np.empty(x.shape, dtype=np.result_type(x, self.c_a, float))
        out[..., 0] = q[0] * head + mid @ self.c_a
        out[..., 1:-1] = (
            self._block.apply(mid)
            + head[..., None] * q[1:-1]
            + tail[..., None] * q[-2:0:-1]
        )
        out[..., -1] = mid @ self.c_b + q[0] * tail
        return np.moveaxis(out, -1, axis)

    def apply_inverse(self, y: np.ndarray, axis: int = -1) -> np.ndarray:
        y = np.asarray(y)
        self._check_length(y, axis)
        y = np.moveaxis(y, axis, -1)
        head, mid, tail = y[..., 0], y[..., 1:-1], y[..., -1]

        # decoupled part
        z = self._x.apply(mid) + head[..., None] * self.v + tail[..., None] * self.w

        # rank-2 correction
        (ca_v, ca_w), (cb_v, cb_w) = self.corner
        r_a = ca_v * head + mid @ self.row_a + ca_w * tail
        r_b = cb_v * head + mid @ self.row_b + cb_w * tail
        k = self.capacitance_inverse
        t_a = k[0, 0] * r_a + k[0, 1] * r_b
        t_b = k[1, 0] * r_a + k[1, 1] * r_b

        out = np.empty(y.shape, dtype=np.result_type(z, y))
        out[..., 0] = self.alpha * (head - t_a)
        out[..., 1:-1] = z - t_a[..., None] * self.v - t_b[..., None] * self.w
        out[..., -1] = self.alpha * (tail - t_b)
        return np.moveaxis(out, -1, axis)


@functools.lru_cache(maxsize=CACHE_SIZE)
def build_transform(basis: BoundaryBasis, n: int) -> StructuredTransform:
    _check_order(n)
    kind, _, x_direction, xt_direction = _INTERIOR[basis]
    x = get_plan(kind, n - 2, x_direction)
    xt = get_plan(kind, n - 2, xt_direction)

    q = _boundary_column(basis, n)
    q1, q_hat = q[0], q[1:-1]
    v = -x.apply(q_hat) / q1
    # equals J v only when J X J = X, which holds for neither DCT-II nor DFT
    w = -x.apply(q_hat[::-1]) / q1

    c_a, c_b = _boundary_rows(basis, n)
    corner = np.array([[c_a @ v, c_a @ w], [c_b @ v, c_b @ w]])
    capacitance = np.eye(2) + corner
    condition = np.linalg.cond(capacitance)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise DegenerateTransformError(
            f"{basis.value} transform of order {n}: capacitance condition {condition:.3g}"
        )
    logger.debug("built %s transform n=%d, capacitance cond %.3g", basis.value, n, condition)

    interval, grid = extended_grid(basis, n)
    return StructuredTransform(
        basis=basis,
        order=n,
        column=frozen(q),
        c_a=frozen(c_a),
        c_b=frozen(c_b),
        alpha=1.0 / q1,
        v=frozen(v),
        w=frozen(w),
        row_a=frozen(xt.apply(c_a)),
        row_b=frozen(xt.apply(c_b)),
        corner=frozen(corner),
        capacitance_inverse=frozen(scipy.linalg.inv(capacitance)),
        grid=frozen(grid),
        interval=interval,
    )


@dataclasses.dataclass(frozen=True, eq=False)
class UnitaryTransform(BaseTransform):
    """T = F^H (periodic) or T = C^T (reflective)"""

    kind: TrigKind
    order: int

    @property
    def n(self) -> int:
        return self.order

    @property
    def is_complex(self) -> bool:
        return self.kind is TrigKind.FOURIER

    def apply(self, x: np.ndarray, axis: int = -1) -> np.ndarray:
        x = np.asarray(x)
        self._check_length(x, axis)
        return get_plan(self.kind, self.order, Direction.INVERSE).apply(x, axis=axis)

    def apply_inverse(self, y: np.ndarray, axis: int = -1) -> np.ndarray:
        y = np.asarray(y)
        self._check_length(y, axis)
        return get_plan(self.kind, self.order, Direction.FORWARD).apply(y, axis=axis)


@functools.lru_cache(maxsize=CACHE_SIZE)
def build_unitary_transform(kind: TrigKind, n: int) -> UnitaryTransform:
    if n < 1:
        raise SizeError(f"order must be positive, got {n}")
    return UnitaryTransform(kind=kind, order=n)


# Convenience functions
def transform_apply(t: BaseTransform, v: np.ndarray) -> np.ndarray:
    return t.apply(v)


def transform_apply_inverse(t: BaseTransform, y: np.ndarray) -> np.ndarray:
    return t.apply_inverse(y)
