import abc
import contextlib
import json
import os
import typing

import numpy as np

settings = {}
with contextlib.suppress(FileNotFoundError):
    with open("deblur_settings.json", encoding="utf-8") as _f:
        settings = json.load(_f)

THREADS = settings.get("threads", 1)
with contextlib.suppress(KeyError, ValueError):
    THREADS = int(os.environ["FASTDEBLUR_THREADS"])
# scipy.fft rejects workers=0; negative values count back from the cpu count
THREADS = THREADS or 1

PSF_TOLERANCE = settings.get("psf_tolerance", 1e-8)
CONDITION_LIMIT = settings.get("condition_limit", 1e12)
GCV_MU_MIN = settings.get("gcv_mu_min", 1e-12)
GCV_MU_MAX = settings.get("gcv_mu_max", 1e1)
GCV_POINTS = settings.get("gcv_points", 200)
GCV_TOLERANCE = settings.get("gcv_tolerance", 1e-3)
# smallest share of the spectrum the GCV residual must spread over
GCV_MIN_MODES = settings.get("gcv_min_modes", 0.01)
DIRECT_SYMBOL_LIMIT = settings.get("direct_symbol_limit", 64)
# plans and transforms kept per process; each holds O(n) correction data
CACHE_SIZE = settings.get("cache_size", 64)
IMAG_WARNING = settings.get("imag_warning", 1e-6)
LOG_LEVEL = settings.get("log_level", "WARNING")

# smallest order with a nonempty interior and room for a 3-point PSF
MIN_ORDER = 5


class DeblurError(Exception):
    exit_code = 2


class ValidationError(DeblurError):
    exit_code = 2


class SizeError(ValidationError):
    pass


class DimensionError(ValidationError):
    pass


class EmptyInputError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class UnsupportedPsfError(ValidationError):
    pass


class PsfNormalizationError(ValidationError):
    pass


class IncompatibleSmootherError(ValidationError):
    pass


class FileFormatError(ValidationError):
    pass


class NumericalError(DeblurError):
    exit_code = 3


class DegenerateTransformError(NumericalError):
    pass


class DegenerateGcvError(NumericalError):
    pass


class RestorationReport(typing.NamedTuple):
    restored: np.ndarray
    mu_used: float
    mu_source: str  # "fixed" or "gcv"

    # only when the ground truth was supplied
    rre: None | float = None

    # (mu, G(mu)) samples of the search grid, only when mu came from GCV
    gcv_curve: None | list[tuple[float, float]] = None

    # norm of the imaginary part dropped from a complex-basis restoration
    imag_residue: float = 0.0


class BaseTransform(abc.ABC):
    """An invertible n x n basis T applied along one axis of an array"""

    @property
    @abc.abstractmethod
    def n(self) -> int:
        pass

    @property
    @abc.abstractmethod
    def is_complex(self) -> bool:
        pass

    @abc.abstractmethod
    def apply(self, x: np.ndarray, axis: int = -1) -> np.ndarray:
        """Return T @ x along `axis`"""
        pass

    @abc.abstractmethod
    def apply_inverse(self, y: np.ndarray, axis: int = -1) -> np.ndarray:
        """Return inv(T) @ y along `axis`"""
        pass

    def _check_length(self, x: np.ndarray, axis: int):
        if x.ndim == 0 or x.shape[axis] != self.n:
            length = None if x.ndim == 0 else x.shape[axis]
            raise DimensionError(f"expected length {self.n} along axis {axis}, got {length}")


def frozen(array: np.ndarray) -> np.ndarray:
    """Mark `array` read-only so cached objects stay immutable"""
    array.flags.writeable = False
    return array
