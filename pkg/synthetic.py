"""Test scenes that stay nonzero, sloped and curved at the boundary

smooth_* scenes follow polynomial trends. oscillating_* scenes bend hard at
the edges while their end slopes match, which separates boundary models that
only reproduce linear trends from those that also absorb the curvature.
"""

import numpy as np

from core import SizeError


def _axis(n: int, margin: int) -> np.ndarray:
    # the field of view spans [0, 1]; the margin extends the same spacing outward
    if n < 2 or margin < 0:
        raise SizeError(f"invalid scene size n={n}, margin={margin}")
    step = 1.0 / (n - 1)
    return np.linspace(-margin * step, 1.0 + margin * step, n + 2 * margin)


def smooth_signal(n: int, margin: int = 0) -> np.ndarray:
    """Cubic trend plus two bumps, n + 2 * margin samples"""
    x = _axis(n, margin)
    trend = 0.6 + 0.8 * x - 1.1 * x**2 + 0.5 * x**3
    bumps = 0.5 * np.exp(-(((x - 0.3) / 0.06) ** 2)) + 0.35 * np.exp(-(((x - 0.7) / 0.1) ** 2))
    return trend + bumps


def smooth_image(n1: int, n2: int, margin: int = 0) -> np.ndarray:
    """Quadratic surface plus two Gaussian blobs, values within [0, 1] on the field of view"""
    x = _axis(n1, margin)[:, None]
    y = _axis(n2, margin)[None, :]
    surface = 0.35 + 0.25 * x + 0.2 * y - 0.2 * x**2 + 0.1 * x * y + 0.05 * y**2
    blobs = 0.3 * np.exp(-((x - 0.35) ** 2 + (y - 0.6) ** 2) / 0.02) + 0.2 * np.exp(
        -((x - 0.7) ** 2 + (y - 0.3) ** 2) / 0.05
    )
    return surface + blobs


def _edge_wave(t: np.ndarray) -> np.ndarray:
    # slope 1.5 and curvature -4.8 pi^2 at both ends; the slopes agree, so the
    # scene has no net curvature over the field of view
    return 1.5 * t + 0.3 * np.cos(4 * np.pi * t)


def oscillating_signal(n: int, margin: int = 0) -> np.ndarray:
    """Sloped wave with strong curvature at both ends, plus a narrow bump"""
    x = _axis(n, margin)
    return 0.5 + _edge_wave(x) + 0.3 * np.exp(-(((x - 0.55) / 0.05) ** 2))


def oscillating_image(n1: int, n2: int, margin: int = 0) -> np.ndarray:
    x = _axis(n1, margin)[:, None]
    y = _axis(n2, margin)[None, :]
    blob = 0.3 * np.exp(-((x - 0.4) ** 2 + (y - 0.6) ** 2) / 0.01)
    return 0.3 + 0.5 * _edge_wave(x) + 0.4 * _edge_wave(y) + 0.1 * x * y + blob
