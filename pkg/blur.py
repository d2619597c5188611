"""PSFs, their symbol and the five blurring operators

Every operator is a spectral triple A = T diag(d) inv(T). The eigenvalues are
samples of the symbol z(t) = sum_j h_j exp(i j t) on a node grid, and the
boundary-corrected operators pin the two boundary eigenvalues to z(0) = 1.
Row i of the blurring matrix reads h_-m .. h_m starting at column i - m, the
convention fixed by A_P = F^H diag(z) F.
"""

import dataclasses
import enum
import logging
import typing

import numpy as np
import scipy.fft
import scipy.signal

from core import (
    DIRECT_SYMBOL_LIMIT,
    MIN_ORDER,
    PSF_TOLERANCE,
    THREADS,
    BaseTransform,
    DimensionError,
    ParameterError,
    PsfNormalizationError,
    SizeError,
    UnsupportedPsfError,
    frozen,
)
from boundary import BoundaryBasis, build_transform, build_unitary_transform
from trig import TrigKind

logger = logging.getLogger(__name__)


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    REFLECTIVE = "reflective"
    ANTIREFLECTIVE = "antireflective"
    HOC_COSINE = "hoc-cosine"
    HOC_FOURIER = "hoc-fourier"

    @property
    def requires_symmetric(self) -> bool:
        return self in (
            BoundaryCondition.REFLECTIVE,
            BoundaryCondition.ANTIREFLECTIVE,
            BoundaryCondition.HOC_COSINE,
        )

    @property
    def corrected(self) -> bool:
        """True when two eigenvalues are pinned to 1 by boundary columns"""
        return self not in (BoundaryCondition.PERIODIC, BoundaryCondition.REFLECTIVE)

    @property
    def is_complex(self) -> bool:
        return self in (BoundaryCondition.PERIODIC, BoundaryCondition.HOC_FOURIER)


def check_weights(weights, normalize: bool = False) -> np.ndarray:
    w = np.array(weights, dtype=float)
    if w.size == 0:
        raise UnsupportedPsfError("empty PSF")
    if not np.all(np.isfinite(w)):
        raise UnsupportedPsfError("PSF has non-finite entries")
    if any(size % 2 == 0 for size in w.shape):
        raise UnsupportedPsfError(f"PSF sizes must be odd, got {w.shape}")
    total = w.sum()
    if abs(total - 1.0) > PSF_TOLERANCE:
        if not normalize or total == 0:
            raise PsfNormalizationError(f"PSF sums to {total!r}, not 1")
        w /= total
    return w


def is_symmetric(weights: np.ndarray) -> bool:
    """Symmetric about the center along every axis"""
    return all(
        np.allclose(weights, np.flip(weights, axis), rtol=1e-12, atol=1e-15)
        for axis in range(weights.ndim)
    )


class Psf(typing.NamedTuple):
    # h_-m, ..., h_0, ..., h_m
    weights: np.ndarray
    symmetric: bool

    @property
    def m(self) -> int:
        return (self.weights.size - 1) // 2

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.m, self.m + 1)

    @classmethod
    def from_weights(cls, weights, normalize: bool = False):
        w = check_weights(weights, normalize)
        if w.ndim != 1:
            raise UnsupportedPsfError(f"expected a 1D PSF, got shape {w.shape}")
        return cls(weights=frozen(w), symmetric=is_symmetric(w))


def identity_psf() -> Psf:
    return Psf.from_weights([1.0])


def gaussian_psf(m: int, sigma: float) -> Psf:
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    j = np.arange(-m, m + 1)
    w = np.exp(-(j**2) / (2.0 * sigma**2))
    return Psf.from_weights(w / w.sum())


def motion_psf(m: int) -> Psf:
    """Uniform one-sided motion over h_0 .. h_m"""
    w = np.zeros(2 * m + 1)
    w[m:] = 1.0 / (m + 1)
    return Psf.from_weights(w)


def symbol_eval(psf: Psf, t):
    """z(t) = sum_j h_j exp(i j t); real when the PSF is symmetric"""
    t = np.asarray(t, dtype=float)
    h = psf.weights
    if psf.symmetric:
        j = np.arange(1, psf.m + 1)
        z = h[psf.m] + 2.0 * np.cos(np.multiply.outer(t, j)) @ h[psf.m + 1 :]
    else:
        z = np.exp(1j * np.multiply.outer(t, psf.offsets)) @ h
    return z[()]


def node_layout(bc: BoundaryCondition, n: int) -> tuple[int, np.ndarray, tuple[int, ...]]:
    """Return (L, indices, pinned): node i is 2 pi indices[i] / L

    Every node grid is a subset of the uniform grid of size L, which lets one
    FFT of the zero-padded PSF produce all eigenvalues.
    """
    if bc is BoundaryCondition.PERIODIC:
        return n, np.arange(n), ()
    if bc is BoundaryCondition.REFLECTIVE:
        return 2 * n, np.arange(n), ()
    if bc is BoundaryCondition.ANTIREFLECTIVE:
        return 2 * (n - 1), np.r_[np.arange(n - 1), 0], (0, n - 1)
    k = n - 2
    size = 2 * k if bc is BoundaryCondition.HOC_COSINE else k
    return size, np.r_[0, np.arange(k), 0], (0, n - 1)


def check_support(m: int, n: int, bc: BoundaryCondition):
    if bc.corrected:
        if n < MIN_ORDER:
            raise SizeError(f"{bc.value} needs order at least {MIN_ORDER}, got {n}")
        if 2 * m + 1 > n - 2:
            raise SizeError(f"PSF support {2 * m + 1} exceeds n - 2 = {n - 2}")
    elif n < 1 or 2 * m + 1 > n:
        raise SizeError(f"PSF support {2 * m + 1} exceeds n = {n}")


def eigenvalue_grid(bc: BoundaryCondition, n: int) -> np.ndarray:
    check_support(0, n, bc)
    size, indices, _ = node_layout(bc, n)
    return 2 * np.pi * indices / size


def _symbol_on_grid(psf: Psf, size: int, indices: np.ndarray) -> np.ndarray:
    if psf.weights.size <= DIRECT_SYMBOL_LIMIT:
        return np.atleast_1d(symbol_eval(psf, 2 * np.pi * indices / size))
    padded = np.zeros(size)
    np.add.at(padded, psf.offsets % size, psf.weights)
    z = scipy.fft.ifft(padded, norm="forward", workers=THREADS)[indices]
    return z.real if psf.symmetric else z


def transform_for(bc: BoundaryCondition, n: int) -> BaseTransform:
    if bc is BoundaryCondition.PERIODIC:
        return build_unitary_transform(TrigKind.FOURIER, n)
    if bc is BoundaryCondition.REFLECTIVE:
        return build_unitary_transform(TrigKind.COSINE, n)
    return build_transform(BoundaryBasis(bc.value), n)


def real_part(result: np.ndarray, like: np.ndarray) -> np.ndarray:
    """Drop the imaginary residue of a complex-basis result for real input"""
    if np.iscomplexobj(result) and not np.iscomplexobj(like):
        return result.real.copy()
    return result


@dataclasses.dataclass(frozen=True, eq=False)
class BlurOperator:
    bc: BoundaryCondition
    shape: tuple[int, ...]
    eigenvalues: np.ndarray
    transforms: tuple[BaseTransform, ...]
    psf: typing.Any  # Psf, or multidim.Psf2D for two axes

    # symbol nodes per axis
    nodes: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return int(np.prod(self.shape))

    def _check_shape(self, f: np.ndarray):
        if f.shape != self.shape:
            raise DimensionError(f"operator has shape {self.shape}, got {f.shape}")

    def to_spectral(self, f) -> np.ndarray:
        """inv(T) f along every axis"""
        c = np.asarray(f)
        self._check_shape(c)
        for axis, t in enumerate(self.transforms):
            c = t.apply_inverse(c, axis=axis)
        return c

    def from_spectral(self, c) -> np.ndarray:
        f = np.asarray(c)
        self._check_shape(f)
        for axis, t in enumerate(self.transforms):
            f = t.apply(f, axis=axis)
        return f

    def apply(self, f, keep_complex: bool = False) -> np.ndarray:
        f = np.asarray(f)
        result = self.from_spectral(self.eigenvalues * self.to_spectral(f))
        return result if keep_complex else real_part(result, f)

    def reblurred(self) -> "BlurOperator":
        """A' = A(conj z), the operator of the PSF rotated by 180 degrees"""
        return dataclasses.replace(
            self,
            eigenvalues=frozen(np.conj(self.eigenvalues)),
            psf=reblur_psf(self.psf),
        )


def build_operator(psf: Psf, n: int, bc: BoundaryCondition) -> BlurOperator:
    check_support(psf.m, n, bc)
    if bc.requires_symmetric and not psf.symmetric:
        raise UnsupportedPsfError(f"{bc.value} boundary conditions need a symmetric PSF")

    size, indices, pinned = node_layout(bc, n)
    d = np.array(_symbol_on_grid(psf, size, indices), dtype=complex if bc.is_complex else float)
    d[list(pinned)] = 1.0
    return BlurOperator(
        bc=bc,
        shape=(n,),
        eigenvalues=frozen(d),
        transforms=(transform_for(bc, n),),
        psf=psf,
        nodes=(frozen(2 * np.pi * indices / size),),
    )


def blur_extended(scene: np.ndarray, psf) -> np.ndarray:
    """Blur a scene that extends m samples past the field of view on every side

    This is the reference model with no boundary assumption; the result is
    the field of view, m samples shorter at each end of every axis.
    """
    scene = np.asarray(scene, dtype=float)
    h = psf.weights
    if scene.ndim != h.ndim:
        raise DimensionError(f"{scene.ndim}D scene with a {h.ndim}D PSF")
    if any(s < k for s, k in zip(scene.shape, h.shape)):
        raise SizeError(f"scene {scene.shape} is smaller than the PSF {h.shape}")
    return scipy.signal.correlate(scene, h, mode="valid", method="direct")


def field_of_view(scene: np.ndarray, psf) -> np.ndarray:
    """The part of `scene` that `blur_extended` returns"""
    cut = tuple(slice((k - 1) // 2, s - (k - 1) // 2) for s, k in zip(scene.shape, psf.weights.shape))
    return np.asarray(scene)[cut]


def add_noise(g: np.ndarray, level: float, seed: int) -> np.ndarray:
    """g + eta with Gaussian eta rescaled to norm(eta) = level * norm(g)"""
    if level < 0:
        raise ParameterError(f"noise level must be nonnegative, got {level}")
    g = np.asarray(g, dtype=float)
    if level == 0:
        return g.copy()
    # Philox is counter-based: the draw depends on the seed only
    rng = np.random.Generator(np.random.Philox(seed))
    eta = rng.standard_normal(g.shape)
    return g + eta * (level * np.linalg.norm(g) / np.linalg.norm(eta))


# Convenience functions
def reblur_psf(psf):
    return psf._replace(weights=frozen(np.flip(psf.weights).copy()))


def blur_apply(op: BlurOperator, f: np.ndarray) -> np.ndarray:
    return op.apply(f)
