"""Tikhonov regularization with reblurring, and GCV choice of mu

With A = T diag(d) inv(T) and L = T diag(s) inv(T) sharing one basis, the
reblurred normal equations (A'A + mu L'L) f = A' g reduce to the spectral
filter f = T diag(conj(d) / (|d|^2 + mu |s|^2)) inv(T) g.
"""

import enum
import logging
import typing

import numpy as np
import scipy.optimize

from core import (
    GCV_MIN_MODES,
    GCV_MU_MAX,
    GCV_MU_MIN,
    GCV_POINTS,
    GCV_TOLERANCE,
    IMAG_WARNING,
    DegenerateGcvError,
    DimensionError,
    IncompatibleSmootherError,
    ParameterError,
    RestorationReport,
    frozen,
)
from blur import BlurOperator, real_part

logger = logging.getLogger(__name__)

# |d_i| below this counts as a zero eigenvalue in the null space check
NULL_TOLERANCE = 1e-14


class SmoothingKind(enum.Enum):
    IDENTITY = "identity"
    LAPLACIAN = "laplacian"


class SmoothingOperator(typing.NamedTuple):
    kind: SmoothingKind
    eigenvalues: np.ndarray


class FilterSpectrum(typing.NamedTuple):
    phi: np.ndarray
    mu: float


def laplacian_symbol(t):
    """s(t) = 2 - 2 cos(t), the symbol of the stencil (-1, 2, -1)"""
    return 2.0 - 2.0 * np.cos(t)


def smoothing_eigenvalues(kind: SmoothingKind | str, op: BlurOperator) -> SmoothingOperator:
    kind = SmoothingKind(kind)
    if kind is SmoothingKind.IDENTITY:
        s = np.ones(op.shape)
    else:
        # sum of the axis symbols: the discrete Laplacian under the same BCs
        s = np.zeros(op.shape)
        for axis, nodes in enumerate(op.nodes):
            shape = [1] * len(op.shape)
            shape[axis] = -1
            s = s + laplacian_symbol(nodes).reshape(shape)

    joint = (np.abs(op.eigenvalues) <= NULL_TOLERANCE) & (s == 0)
    if np.any(joint):
        index = tuple(int(i) for i in np.argwhere(joint)[0])
        raise IncompatibleSmootherError(
            f"blur and {kind.value} smoother share a null space at index {index}"
        )
    return SmoothingOperator(kind=kind, eigenvalues=frozen(s))


def _check_mu(mu: float):
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")


def filter_factors(op: BlurOperator, smoother: SmoothingOperator, mu: float) -> FilterSpectrum:
    _check_mu(mu)
    d2 = np.abs(op.eigenvalues) ** 2
    s2 = np.abs(smoother.eigenvalues) ** 2
    return FilterSpectrum(phi=d2 / (d2 + mu * s2), mu=mu)


class TikhonovProblem:
    """Spectral data of one (A, L, g) triple, reused for every mu

    inv(T) g, |d|^2 and |s|^2 are computed once; each solve then costs one
    forward transform and each GCV evaluation is O(n).
    """

    def __init__(self, op: BlurOperator, smoother: SmoothingOperator, g):
        g = np.asarray(g)
        if smoother.eigenvalues.shape != op.shape:
            raise DimensionError(
                f"smoother has shape {smoother.eigenvalues.shape}, operator {op.shape}"
            )
        self.op = op
        self.smoother = smoother
        self.g = g
        self.g_hat = op.to_spectral(g)
        self._d2 = np.abs(op.eigenvalues) ** 2
        self._s2 = np.abs(smoother.eigenvalues) ** 2
        self._g_hat2 = np.abs(self.g_hat) ** 2

    def coefficients(self, mu: float) -> np.ndarray:
        # Phi / d fused, finite where d = 0
        _check_mu(mu)
        return np.conj(self.op.eigenvalues) / (self._d2 + mu * self._s2)

    def solve(self, mu: float, keep_complex: bool = False) -> np.ndarray:
        f = self.op.from_spectral(self.coefficients(mu) * self.g_hat)
        return f if keep_complex else real_part(f, self.g)

    def gcv(self, mu: float) -> float:
        _check_mu(mu)
        sigma = self._s2 / (self._d2 + mu * self._s2)
        total = sigma.sum()
        if total == 0:
            raise DegenerateGcvError("GCV denominator vanishes: every smoother eigenvalue is 0")
        return float(np.sum(sigma**2 * self._g_hat2) / total**2)

    def gcv_curve(self, mus) -> np.ndarray:
        return np.array([self.gcv(mu) for mu in mus])

    def rre_curve(self, mus, truth) -> np.ndarray:
        return np.array([rre(truth, self.solve(mu)) for mu in mus])

    def residual_modes(self, mu: float) -> float:
        """Effective number of spectral modes carrying the GCV residual

        Near a symbol zero the residual weights 1 - Phi collapse onto a few
        modes as mu shrinks, and G can dip without measuring anything.
        """
        _check_mu(mu)
        weights = mu * self._s2 / (self._d2 + mu * self._s2)
        square_sum = np.sum(weights**2)
        if square_sum == 0:
            return 0.0
        return float(weights.sum() ** 2 / square_sum)

    def select_mu(
        self,
        mu_range: tuple[float, float] = (GCV_MU_MIN, GCV_MU_MAX),
        count: int = GCV_POINTS,
    ) -> tuple[float, list[tuple[float, float]]]:
        """Minimize G on a log grid, then refine between the best point's neighbours

        Returns mu and the sampled (mu, G) curve. Grid points whose residual
        spreads over fewer than GCV_MIN_MODES of the modes are skipped. When
        several grid values tie for the minimum the geometric midpoint of the
        first and last tied mu is returned without refinement.
        """
        lo, hi = mu_range
        if not 0 < lo < hi:
            raise ParameterError(f"invalid mu range [{lo}, {hi}]")
        if count < 2:
            raise ParameterError(f"mu grid needs at least 2 points, got {count}")

        mus = np.geomspace(lo, hi, count)
        values = self.gcv_curve(mus)
        curve = list(zip(mus.tolist(), values.tolist()))

        modes = np.array([self.residual_modes(mu) for mu in mus])
        usable = modes >= GCV_MIN_MODES * self._d2.size
        if not usable.any():
            logger.warning(
                "GCV residual spans at most %.3g modes on [%g, %g]", modes.max(), lo, hi
            )
            usable[:] = True
        first = int(np.argmax(usable))
        if first:
            logger.debug("GCV skips %d grid points below mu=%.6g", first, mus[first])
        masked = np.where(usable, values, np.inf)
        best = int(np.argmin(masked))

        tied = np.flatnonzero(np.isclose(masked, values[best], rtol=1e-12, atol=0))
        if tied.size > 1:
            mu = float(np.sqrt(mus[tied[0]] * mus[tied[-1]]))
            logger.debug("flat GCV over %d grid points, mu=%.6g", tied.size, mu)
            return mu, curve

        left, right = max(best - 1, first), min(best + 1, count - 1)
        result = scipy.optimize.minimize_scalar(
            lambda x: self.gcv(np.exp(x)),
            bounds=(np.log(mus[left]), np.log(mus[right])),
            method="bounded",
            options={"xatol": GCV_TOLERANCE},
        )
        mu = float(mus[best])
        if result.success and result.fun < values[best]:
            mu = float(np.exp(result.x))
        logger.debug("GCV grid minimum mu=%.6g, refined to %.6g", mus[best], mu)
        return mu, curve


def rre(truth, restored) -> float:
    truth = np.asarray(truth)
    restored = np.asarray(restored)
    if truth.shape != restored.shape:
        raise DimensionError(f"truth has shape {truth.shape}, restored {restored.shape}")
    norm = np.linalg.norm(truth)
    if norm == 0:
        raise ParameterError("relative error against a zero truth")
    return float(np.linalg.norm(truth - restored) / norm)


def restore(
    op: BlurOperator,
    smoother: SmoothingOperator,
    g,
    mu: None | float = None,
    truth=None,
    mu_range: tuple[float, float] = (GCV_MU_MIN, GCV_MU_MAX),
    count: int = GCV_POINTS,
) -> RestorationReport:
    """Restore g with a fixed mu, or with the GCV choice when mu is None"""
    problem = TikhonovProblem(op, smoother, g)
    if mu is None:
        mu, curve = problem.select_mu(mu_range, count)
        source = "gcv"
    else:
        curve, source = None, "fixed"

    full = problem.solve(mu, keep_complex=True)
    restored = real_part(full, problem.g)
    residue = 0.0
    if restored is not full:
        residue = float(np.linalg.norm(full.imag))
        if residue > IMAG_WARNING * np.linalg.norm(restored):
            logger.warning(
                "%s restoration has imaginary residue %.3g", op.bc.value, residue
            )

    return RestorationReport(
        restored=restored,
        mu_used=float(mu),
        mu_source=source,
        rre=None if truth is None else rre(truth, restored),
        gcv_curve=curve,
        imag_residue=residue,
    )


# Convenience functions
def tikhonov_solve(op: BlurOperator, smoother: SmoothingOperator, g, mu: float) -> np.ndarray:
    return TikhonovProblem(op, smoother, g).solve(mu)


def gcv_value(op: BlurOperator, smoother: SmoothingOperator, g, mu: float) -> float:
    return TikhonovProblem(op, smoother, g).gcv(mu)


def gcv_select(
    op: BlurOperator,
    smoother: SmoothingOperator,
    g,
    mu_range: tuple[float, float] = (GCV_MU_MIN, GCV_MU_MAX),
    count: int = GCV_POINTS,
) -> tuple[float, list[tuple[float, float]]]:
    return TikhonovProblem(op, smoother, g).select_mu(mu_range, count)
