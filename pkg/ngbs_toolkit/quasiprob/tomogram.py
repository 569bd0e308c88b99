"""
Tomogram - Optical tomogram w(X, theta) of Fock superpositions

w(X, theta) is the probability density of the rotated quadrature
X_theta = x cos(theta) + p' sin(theta). For psi = sum_n |c_n| e^{i phi_n} |n>

    w(X, theta) = sum_n |c_n|^2 psi_n(X)^2
                + sum_{n<k} 2 |c_n||c_k| cos((n - k) theta - (phi_n - phi_k)) psi_n(X) psi_k(X)

which is |sum_n c_n e^{-i n theta} psi_n(X)|^2, the form evaluated here.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.integrate import trapezoid

from ..config import DEFAULT_CONFIG
from ..errors import ParameterError
from ..fock.state import FockSuperposition
from .special import hermite_functions
from .wigner import phase_space_radius, wigner_values

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TomogramGrid:
    """w sampled on X x theta; values[i, j] = w(x_axis[i], theta_axis[j])"""

    x_axis: np.ndarray
    theta_axis: np.ndarray
    values: np.ndarray
    normalization: np.ndarray

    @property
    def x_range(self):
        return (float(self.x_axis[0]), float(self.x_axis[-1]))


def tomogram_values(coefficients: np.ndarray, X: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """w(X, theta) on arrays of points (broadcast together)"""
    coefficients = np.asarray(coefficients, dtype=complex)
    X, theta = np.broadcast_arrays(np.asarray(X, dtype=float), np.asarray(theta, dtype=float))
    cutoff = len(coefficients) - 1

    table = hermite_functions(cutoff, X)
    amplitude = np.zeros(X.shape, dtype=complex)
    for n in range(cutoff + 1):
        if coefficients[n] != 0:
            amplitude += coefficients[n] * np.exp(-1j * n * theta) * table[n]
    return amplitude.real ** 2 + amplitude.imag ** 2


def tomogram_point(state: FockSuperposition, X: float, theta: float) -> float:
    """Probability density of X_theta at X"""
    return float(tomogram_values(state.coefficients, X, theta))


def tomogram_grid(state: FockSuperposition,
                  x_range: Union[None, float, Sequence[float]] = None,
                  resolution: int = DEFAULT_CONFIG.resolution,
                  n_theta: int = DEFAULT_CONFIG.theta_count) -> TomogramGrid:
    """
    Tomogram on a uniform X lattice and n_theta angles in [0, 2 pi)

    Args:
        state: Fock superposition
        x_range: None (radius sqrt(2N) + 6), a radius, or (X_min, X_max)
        resolution: Number of X points, >= 2
        n_theta: Number of angles, >= 1

    Returns:
        TomogramGrid with the trapezoidal normalization of each column
    """
    if x_range is None:
        radius = phase_space_radius(state.cutoff)
        bounds = (-radius, radius)
    elif np.isscalar(x_range):
        bounds = (-float(x_range), float(x_range))
    else:
        bounds = tuple(float(v) for v in x_range)
        if len(bounds) != 2:
            raise ParameterError(f"X range needs 2 bounds, got {bounds}")
    if bounds[0] >= bounds[1]:
        raise ParameterError(f"X range must be increasing, got {bounds}")
    if resolution < 2:
        raise ParameterError(f"resolution must be >= 2, got {resolution}")
    if n_theta < 1:
        raise ParameterError(f"theta count must be >= 1, got {n_theta}")

    x_axis = np.linspace(bounds[0], bounds[1], int(resolution))
    theta_axis = 2.0 * np.pi * np.arange(int(n_theta)) / int(n_theta)
    X, theta = np.meshgrid(x_axis, theta_axis, indexing='ij')
    values = tomogram_values(state.coefficients, X, theta)

    normalization = trapezoid(values, x_axis, axis=0)
    logger.debug("Tomogram grid %dx%d, normalization range [%.12f, %.12f]",
                 len(x_axis), len(theta_axis), normalization.min(), normalization.max())
    return TomogramGrid(x_axis=x_axis, theta_axis=theta_axis, values=values,
                        normalization=normalization)


def radon_line_integral(state: FockSuperposition, theta: float, X: float,
                        half_width: Optional[float] = None,
                        step: Optional[float] = None) -> float:
    """int W(X cos(theta) - eta sin(theta), X sin(theta) + eta cos(theta)) d eta"""
    if half_width is None:
        half_width = phase_space_radius(state.cutoff, DEFAULT_CONFIG.line_margin)
    if step is None:
        step = DEFAULT_CONFIG.line_step

    count = int(math.ceil(2.0 * half_width / step)) + 1
    eta = np.linspace(-half_width, half_width, count)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    values = wigner_values(state.coefficients, X * cos_t - eta * sin_t, X * sin_t + eta * cos_t)
    return float(trapezoid(values, eta))


def radon_consistency(state: FockSuperposition, theta: float, X: float,
                      half_width: Optional[float] = None,
                      step: Optional[float] = None) -> float:
    """|Radon line integral of W - w(X, theta)|"""
    return abs(radon_line_integral(state, theta, X, half_width, step) - tomogram_point(state, X, theta))
