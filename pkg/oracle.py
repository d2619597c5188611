"""Dense reference constructions for tests

Everything here is assembled entry-wise from the matrix definitions with
O(n^2) storage and O(n^3) work. Nothing on the fast path imports it.
"""

import numpy as np
import scipy.linalg

from core import MIN_ORDER, NumericalError, ParameterError, SizeError
from blur import BoundaryCondition, Psf, reblur_psf
from boundary import BoundaryBasis
from multidim import Psf2D
from trig import TrigKind


def dense_fourier(m: int) -> np.ndarray:
    """F with F_ij = exp(-i 2pi ij / m) / sqrt(m)"""
    return scipy.linalg.dft(m, scale="sqrtn")


def dense_cosine(m: int) -> np.ndarray:
    i = np.arange(m)[:, None]
    j = np.arange(1, m + 1)[None, :]
    scale = np.sqrt(np.where(i == 0, 1.0, 2.0) / m)
    return scale * np.cos(i * (2 * j - 1) * np.pi / (2 * m))


def dense_sine(m: int) -> np.ndarray:
    i = np.arange(1, m + 1)
    return np.sqrt(2.0 / (m + 1)) * np.sin(np.outer(i, i) * np.pi / (m + 1))


def dense_interval(basis: BoundaryBasis, n: int) -> tuple[float, float]:
    if basis is BoundaryBasis.ANTIREFLECTIVE:
        return 0.0, np.pi
    k = n - 2
    if basis is BoundaryBasis.HOC_COSINE:
        return -np.pi / (2 * k), (2 * k + 1) * np.pi / (2 * k)
    return -2 * np.pi / k, 2 * np.pi


def dense_boundary_column(basis: BoundaryBasis, n: int) -> np.ndarray:
    """q (or p) from its closed form; defined down to n = 3"""
    if n < 3:
        raise SizeError(f"boundary column needs n >= 3, got {n}")
    steps = np.arange(n - 1, -1, -1, dtype=float)  # (b - x_i) / h
    if basis is BoundaryBasis.ANTIREFLECTIVE:
        column = steps / (n - 1)
    else:
        a, b = dense_interval(basis, n)
        column = (steps * (b - a) / (n - 1)) ** 2
    return column / np.sqrt(np.sum(column**2))


def dense_transform(basis: BoundaryBasis, n: int) -> np.ndarray:
    """T_X with its interior columns sampled on the whole extended grid"""
    if n < MIN_ORDER:
        raise SizeError(f"order must be at least {MIN_ORDER}, got {n}")
    k = n - 2
    a, b = dense_interval(basis, n)
    x = a + np.arange(n) * (b - a) / (n - 1)

    if basis is BoundaryBasis.ANTIREFLECTIVE:
        j = np.arange(1, k + 1)
        interior = np.sqrt(2.0 / (k + 1)) * np.sin(np.outer(x, j))
        # sin(j x) vanishes at 0 and pi
        interior[[0, -1]] = 0.0
        t = np.zeros((n, n))
    elif basis is BoundaryBasis.HOC_COSINE:
        j = np.arange(k)
        scale = np.sqrt(np.where(j == 0, 1.0, 2.0) / k)
        interior = scale * np.cos(np.outer(x, j))
        t = np.zeros((n, n))
    else:
        j = np.arange(k)
        interior = np.exp(1j * np.outer(x, j)) / np.sqrt(k)
        t = np.zeros((n, n), dtype=complex)

    q = dense_boundary_column(basis, n)
    t[:, 0] = q
    t[:, 1:-1] = interior
    t[:, -1] = q[::-1]
    return t


def dense_basis(bc: BoundaryCondition, n: int) -> np.ndarray:
    if bc is BoundaryCondition.PERIODIC:
        return dense_fourier(n).conj().T
    if bc is BoundaryCondition.REFLECTIVE:
        return dense_cosine(n).T
    return dense_transform(BoundaryBasis(bc.value), n)


def dense_nodes(bc: BoundaryCondition, n: int) -> np.ndarray:
    i = np.arange(n, dtype=float)
    if bc is BoundaryCondition.PERIODIC:
        return 2 * np.pi * i / n
    if bc is BoundaryCondition.REFLECTIVE:
        return np.pi * i / n
    if bc is BoundaryCondition.ANTIREFLECTIVE:
        return np.r_[np.pi * i[: n - 1] / (n - 1), 0.0]
    k = n - 2
    step = np.pi / k if bc is BoundaryCondition.HOC_COSINE else 2 * np.pi / k
    return np.r_[0.0, step * i[:k], 0.0]


def dense_symbol(weights: np.ndarray, *nodes) -> np.ndarray:
    """z on the tensor grid of `nodes`, one node vector per PSF axis"""
    z = np.asarray(weights, dtype=complex)
    for t in reversed(nodes):
        m = (z.shape[-1] - 1) // 2
        z = z @ np.exp(1j * np.outer(np.arange(-m, m + 1), t))
        z = np.moveaxis(z, -1, 0)
    return z


def dense_eigenvalues(psf: Psf, n: int, bc: BoundaryCondition) -> np.ndarray:
    d = dense_symbol(psf.weights, dense_nodes(bc, n))
    if bc.corrected:
        d[[0, -1]] = 1.0
    return d if bc.is_complex else d.real


def dense_eigenvalues_2d(psf2: Psf2D, dims: tuple[int, int], bc: BoundaryCondition) -> np.ndarray:
    n1, n2 = dims
    z = dense_symbol(psf2.weights, dense_nodes(bc, n1), dense_nodes(bc, n2))
    if bc.corrected:
        z[np.ix_([0, -1], [0, -1])] = 1.0
    return z if bc.is_complex else z.real


def spectral_matrix(t: np.ndarray, values: np.ndarray) -> np.ndarray:
    """T diag(values) inv(T), through an LU solve"""
    return scipy.linalg.solve(t.T, (t * values).T).T


def dense_blur_matrix(psf: Psf, n: int, bc: BoundaryCondition) -> np.ndarray:
    a = spectral_matrix(dense_basis(bc, n), dense_eigenvalues(psf, n, bc))
    return a if bc.is_complex else a.real


def stencil_blur_matrix(psf: Psf, n: int, bc: BoundaryCondition) -> np.ndarray:
    """Assemble g_i = sum_j h_j f_(i+j) with f extended by the boundary rule"""
    if bc not in (BoundaryCondition.PERIODIC, BoundaryCondition.REFLECTIVE):
        raise ParameterError(f"no stencil assembly for {bc.value}")
    a = np.zeros((n, n))
    for i in range(n):
        for j, h in zip(psf.offsets, psf.weights):
            r = i + j
            if bc is BoundaryCondition.PERIODIC:
                r %= n
            elif r < 0:
                r = -r - 1
            elif r >= n:
                r = 2 * n - 1 - r
            a[i, r] += h
    return a


def eigs_via_e1_ratio(dense_a: np.ndarray, kind: TrigKind) -> np.ndarray:
    """[X A e1]_i / [X e1]_i for X = F (circulant) or X = C (reflective)"""
    n = dense_a.shape[0]
    x = dense_fourier(n) if kind is TrigKind.FOURIER else dense_cosine(n)
    denominator = x[:, 0]
    if np.any(np.abs(denominator) < 1e-300):
        raise NumericalError("zero entry in the transformed first canonical vector")
    return (x @ dense_a[:, 0]) / denominator


def dense_smoothing(kind: str, bc: BoundaryCondition, dims: tuple[int, ...]) -> np.ndarray:
    if kind == "identity":
        return np.ones(dims)
    nodes = [2 - 2 * np.cos(dense_nodes(bc, n)) for n in dims]
    if len(nodes) == 1:
        return nodes[0]
    return nodes[0][:, None] + nodes[1][None, :]


def dense_tikhonov(psf: Psf, n: int, bc: BoundaryCondition, smoother: str, g, mu: float) -> np.ndarray:
    """Solve (A'A + mu L'L) f = A'g with dense matrices"""
    t = dense_basis(bc, n)
    d = dense_eigenvalues(psf, n, bc)
    s = dense_smoothing(smoother, bc, (n,))
    lhs = spectral_matrix(t, np.abs(d) ** 2 + mu * np.abs(s) ** 2)
    rhs = spectral_matrix(t, dense_eigenvalues(reblur_psf(psf), n, bc)) @ g
    return scipy.linalg.solve(lhs, rhs)


def dense_kron_basis(bc: BoundaryCondition, dims: tuple[int, int]) -> np.ndarray:
    """T1 (x) T2 acting on row-major flattened n1 x n2 arrays"""
    n1, n2 = dims
    return np.kron(dense_basis(bc, n1), dense_basis(bc, n2))


def dense_operator_2d(psf2: Psf2D, dims: tuple[int, int], bc: BoundaryCondition) -> np.ndarray:
    z = dense_eigenvalues_2d(psf2, dims, bc)
    return spectral_matrix(dense_kron_basis(bc, dims), z.ravel())


def exact_gcv_value(psf: Psf, n: int, bc: BoundaryCondition, smoother: str, g, mu: float) -> float:
    """||(I - H) g||^2 / trace(I - H)^2 with H = A inv(A'A + mu L'L) A'

    Equals the fast GCV functional whenever the basis is unitary.
    """
    t = dense_basis(bc, n)
    d = dense_eigenvalues(psf, n, bc)
    s = dense_smoothing(smoother, bc, (n,))
    a = spectral_matrix(t, d)
    a_reblurred = spectral_matrix(t, np.conj(d))
    lhs = spectral_matrix(t, np.abs(d) ** 2 + mu * np.abs(s) ** 2)
    residual = np.eye(n) - a @ scipy.linalg.solve(lhs, a_reblurred)
    return float(np.linalg.norm(residual @ g) ** 2 / np.abs(np.trace(residual)) ** 2)
