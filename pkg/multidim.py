"""Two-dimensional operators built by tensor product

The 2D basis is T1 (x) T2: a 1D transform along every column, then one along
every row. Eigenvalues are assembled in three steps. The interior comes from
one 2D Fourier transform of the zero-padded PSF. The edges belonging to
pinned indices come from the 1D marginal PSFs. The corners are pinned to 1.
"""

import logging
import typing

import numpy as np
import scipy.fft
import scipy.signal

from core import THREADS, BaseTransform, DimensionError, ParameterError, UnsupportedPsfError, frozen
from blur import (
    BlurOperator,
    BoundaryCondition,
    Psf,
    build_operator,
    check_support,
    check_weights,
    gaussian_psf,
    is_symmetric,
    motion_psf,
    node_layout,
    transform_for,
)
from regularization import SmoothingOperator, tikhonov_solve
from trig import Direction

logger = logging.getLogger(__name__)

# a BlurOperator with two axes
Operator2D = BlurOperator
SmoothingOperator2D = SmoothingOperator


class Psf2D(typing.NamedTuple):
    # rows -m1..m1, columns -m2..m2
    weights: np.ndarray

    # quadrantal symmetry: unchanged by flipping either axis
    symmetric: bool

    @property
    def m(self) -> tuple[int, int]:
        rows, cols = self.weights.shape
        return (rows - 1) // 2, (cols - 1) // 2

    @property
    def center(self) -> tuple[int, int]:
        """1-based index of h_00"""
        m1, m2 = self.m
        return m1 + 1, m2 + 1

    @classmethod
    def from_weights(cls, weights, normalize: bool = False):
        w = check_weights(weights, normalize)
        if w.ndim != 2:
            raise UnsupportedPsfError(f"expected a 2D PSF, got shape {w.shape}")
        return cls(weights=frozen(w), symmetric=is_symmetric(w))

    def marginal(self, axis: int) -> Psf:
        """The 1D PSF obtained by summing over `axis`"""
        return Psf.from_weights(self.weights.sum(axis=axis))


def separable_psf(psf_rows: Psf, psf_cols: Psf) -> Psf2D:
    return Psf2D.from_weights(np.outer(psf_rows.weights, psf_cols.weights))


def gaussian_psf_2d(m: int, sigma: float) -> Psf2D:
    g = gaussian_psf(m, sigma)
    return separable_psf(g, g)


def disk_psf(radius: int) -> Psf2D:
    """Uniform out-of-focus blur over the disk a^2 + b^2 <= radius^2"""
    if radius < 0:
        raise ParameterError(f"radius must be nonnegative, got {radius}")
    a = np.arange(-radius, radius + 1)
    w = (a[:, None] ** 2 + a[None, :] ** 2 <= radius**2).astype(float)
    return Psf2D.from_weights(w / w.sum())


def motion_psf_2d(radius: int, m: int) -> Psf2D:
    """Out-of-focus disk followed by one-sided motion of m pixels along rows"""
    disk = disk_psf(radius).weights
    w = scipy.signal.convolve(disk, motion_psf(m).weights[None, :], mode="full")
    return Psf2D.from_weights(w / w.sum())


def tensor_apply(
    t_rows: BaseTransform,
    t_cols: BaseTransform,
    arr,
    direction: Direction = Direction.FORWARD,
) -> np.ndarray:
    """Apply T1 (x) T2 or its inverse to an n1 x n2 array

    `t_rows` has order n1 and acts along axis 0, `t_cols` has order n2 and
    acts along axis 1.
    """
    arr = np.asarray(arr)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2D array, got {arr.ndim} dimensions")
    if direction is Direction.FORWARD:
        return t_cols.apply(t_rows.apply(arr, axis=0), axis=1)
    return t_cols.apply_inverse(t_rows.apply_inverse(arr, axis=0), axis=1)


def _check_psf(psf2: Psf2D, dims: tuple[int, int], bc: BoundaryCondition):
    if len(dims) != 2:
        raise DimensionError(f"expected two dimensions, got {dims}")
    for m, n in zip(psf2.m, dims):
        check_support(m, n, bc)
    if bc.requires_symmetric and not psf2.symmetric:
        raise UnsupportedPsfError(
            f"{bc.value} boundary conditions need a quadrantally symmetric PSF"
        )


def eigenvalues_2d(psf2: Psf2D, dims: tuple[int, int], bc: BoundaryCondition) -> np.ndarray:
    _check_psf(psf2, dims, bc)
    n1, n2 = dims
    size1, rows, pinned_rows = node_layout(bc, n1)
    size2, cols, pinned_cols = node_layout(bc, n2)
    m1, m2 = psf2.m

    # interior
    padded = np.zeros((size1, size2))
    np.add.at(
        padded,
        np.ix_(np.arange(-m1, m1 + 1) % size1, np.arange(-m2, m2 + 1) % size2),
        psf2.weights,
    )
    z = scipy.fft.ifft2(padded, norm="forward", workers=THREADS)[np.ix_(rows, cols)]
    if psf2.symmetric:
        z = z.real
    eigenvalues = np.array(z, dtype=complex if bc.is_complex else float)

    # edges: summing the columns gives the PSF of the pinned rows and vice
    # versa; the 1D eigenvalues carry the pinned 1 onto the four corners
    if pinned_rows:
        eigenvalues[list(pinned_rows), :] = build_operator(psf2.marginal(0), n2, bc).eigenvalues
    if pinned_cols:
        edge = build_operator(psf2.marginal(1), n1, bc).eigenvalues
        eigenvalues[:, list(pinned_cols)] = edge[:, None]
    return eigenvalues


def build_operator_2d(psf2: Psf2D, dims: tuple[int, int], bc: BoundaryCondition) -> Operator2D:
    dims = tuple(int(n) for n in dims)
    eigenvalues = eigenvalues_2d(psf2, dims, bc)
    layouts = [node_layout(bc, n) for n in dims]
    logger.debug("built %s operator of shape %s", bc.value, dims)
    return BlurOperator(
        bc=bc,
        shape=dims,
        eigenvalues=frozen(eigenvalues),
        transforms=tuple(transform_for(bc, n) for n in dims),
        psf=psf2,
        nodes=tuple(frozen(2 * np.pi * indices / size) for size, indices, _ in layouts),
    )


# Convenience functions
def blur_apply_2d(op: Operator2D, f) -> np.ndarray:
    return op.apply(f)


def tikhonov_solve_2d(op: Operator2D, smoother: SmoothingOperator2D, g, mu: float) -> np.ndarray:
    return tikhonov_solve(op, smoother, g, mu)
